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

#include <cmath>
#include <limits>
#include <string>

#include "g1dbn/error.hpp"

namespace g1dbn {

namespace detail {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
inline double ibeta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b). `one_minus_x` must equal 1 - x;
/// passing it separately keeps full precision when x is close to 1.
inline double regularized_incomplete_beta(double a, double b, double x,
                                          double one_minus_x) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::ibeta_continued_fraction(a, b, x) / a;
  }
  return 1.0 -
         front * detail::ibeta_continued_fraction(b, a, one_minus_x) / b;
}

inline double regularized_incomplete_beta(double a, double b, double x) {
  return regularized_incomplete_beta(a, b, x, 1.0 - x);
}

/// P(|T| >= |t|) for T ~ Student-t with `dof` degrees of freedom.
/// Infinite |t| gives 0.
inline double student_t_two_sided(double t, int dof) {
  if (dof < 1) {
    throw Error(ErrorKind::InvalidDof,
                "degrees of freedom must be >= 1, got " + std::to_string(dof),
                dof);
  }
  if (std::isnan(t)) {
    throw Error(ErrorKind::InvalidArgument, "t statistic is NaN");
  }
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double nu = static_cast<double>(dof);
  const double t2 = t * t;
  const double denom = nu + t2;
  const double p = regularized_incomplete_beta(0.5 * nu, 0.5, nu / denom,
                                               t2 / denom);
  return std::fmin(1.0, std::fmax(0.0, p));
}

}  // namespace g1dbn
