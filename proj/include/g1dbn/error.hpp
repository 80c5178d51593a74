/*
 * Copyright 2026 The g1dbn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace g1dbn {

enum class ErrorKind {
  NonFinite,
  TooFewTimePoints,
  TooFewVariables,
  InvalidArgument,
  RankDeficient,
  TooFewRows,
  InvalidDof,
  TooManyParents,
  EmptyGrid,
  StabilityNotReached,
  Unstable,
  SingularConditioning,
  BudgetExceeded,
  EmptyTruth,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::TooFewTimePoints: return "TooFewTimePoints";
    case ErrorKind::TooFewVariables: return "TooFewVariables";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::InvalidDof: return "InvalidDof";
    case ErrorKind::TooManyParents: return "TooManyParents";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::StabilityNotReached: return "StabilityNotReached";
    case ErrorKind::Unstable: return "Unstable";
    case ErrorKind::SingularConditioning: return "SingularConditioning";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptyTruth: return "EmptyTruth";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure raised by the library. `kind()` identifies the failure;
/// `index_a()`/`index_b()` carry the 0-based row/column, target/count or
/// similar payload when the kind has one, and `value()` a real payload
/// (e.g. a spectral radius).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long long a = -1,
        long long b = -1, double value = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        a_(a),
        b_(b),
        value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  long long index_a() const noexcept { return a_; }
  long long index_b() const noexcept { return b_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  long long a_;
  long long b_;
  double value_;
};

}  // namespace g1dbn
