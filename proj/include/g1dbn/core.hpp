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

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "g1dbn/error.hpp"

namespace g1dbn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// How much data a series must carry. Step 1 regresses on two lagged
/// predictors plus an intercept, so it needs n - 4 >= 1.
enum class SeriesUse { Basic, Step1 };

inline constexpr Eigen::Index kMinStep1TimePoints = 5;

/// Throws `Error` unless `data` (rows = time points, columns = variables)
/// is at least 2 x 2, entirely finite, and has n >= 5 when `use` is Step1.
inline void validate_timeseries(const Matrix& data,
                                SeriesUse use = SeriesUse::Basic) {
  const auto n = data.rows();
  const auto p = data.cols();
  const Eigen::Index min_n = use == SeriesUse::Step1 ? kMinStep1TimePoints : 2;
  if (n < min_n) {
    throw Error(ErrorKind::TooFewTimePoints,
                "series has " + std::to_string(n) + " time points, need >= " +
                    std::to_string(min_n),
                n);
  }
  if (p < 2) {
    throw Error(ErrorKind::TooFewVariables,
                "series has " + std::to_string(p) + " variables, need >= 2", p);
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) {
      if (!std::isfinite(data(r, c))) {
        throw Error(ErrorKind::NonFinite,
                    "non-finite value at row " + std::to_string(r + 1) +
                        ", column " + std::to_string(c + 1),
                    r, c);
      }
    }
  }
}

/// An n x p matrix of observations: rows are equally spaced time points,
/// columns are variables. Immutable once built.
class TimeSeries {
 public:
  explicit TimeSeries(Matrix data, std::vector<std::string> names = {})
      : data_(std::move(data)), names_(std::move(names)) {
    validate_timeseries(data_);
    if (!names_.empty() &&
        names_.size() != static_cast<std::size_t>(data_.cols())) {
      throw Error(ErrorKind::InvalidArgument,
                  "variable name count does not match column count");
    }
  }

  const Matrix& data() const noexcept { return data_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  Eigen::Index n() const noexcept { return data_.rows(); }
  Eigen::Index p() const noexcept { return data_.cols(); }

 private:
  Matrix data_;
  std::vector<std::string> names_;
};

/// Consecutive-pair design: row t of `predictors` is X_t and row t of
/// `responses` is X_{t+1}.
struct LaggedPairs {
  Matrix predictors;
  Matrix responses;
};

inline LaggedPairs lagged_pairs(const TimeSeries& ts) {
  const auto n = ts.n();
  return {ts.data().topRows(n - 1), ts.data().bottomRows(n - 1)};
}

inline double spectral_radius(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// First-order autoregression X_t = A X_{t-1} + B + eps_t with
/// Cov(eps_t) = sigma. `sigma` is always stored as a full symmetric matrix;
/// `sigma_is_diagonal()` reports whether the off-diagonal part is zero.
class AR1Model {
 public:
  AR1Model(Matrix a, Vector b, Matrix sigma)
      : a_(std::move(a)), b_(std::move(b)), sigma_(std::move(sigma)) {
    const auto p = a_.rows();
    if (p < 1 || a_.cols() != p || b_.size() != p || sigma_.rows() != p ||
        sigma_.cols() != p) {
      throw Error(ErrorKind::InvalidArgument, "inconsistent AR(1) dimensions");
    }
    if (!a_.allFinite() || !b_.allFinite() || !sigma_.allFinite()) {
      throw Error(ErrorKind::NonFinite, "AR(1) parameters must be finite");
    }
    for (Eigen::Index i = 0; i < p; ++i) {
      if (!(sigma_(i, i) > 0.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "sigma diagonal entries must be strictly positive", i);
      }
    }
    if (!sigma_.isApprox(sigma_.transpose(), 1e-12) &&
        (sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-14) {
      throw Error(ErrorKind::InvalidArgument, "sigma must be symmetric");
    }
    if (!sigma_is_diagonal()) {
      Eigen::LLT<Matrix> llt(sigma_);
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::InvalidArgument,
                    "sigma must be positive definite");
      }
    }
  }

  /// Diagonal-covariance convenience constructor; `variances` holds sigma_ii^2.
  static AR1Model with_diagonal(Matrix a, Vector b, const Vector& variances) {
    return AR1Model(std::move(a), std::move(b), variances.asDiagonal());
  }

  const Matrix& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  Eigen::Index p() const noexcept { return a_.rows(); }

  bool sigma_is_diagonal() const {
    const auto p = sigma_.rows();
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (i != j && sigma_(i, j) != 0.0) return false;
    return true;
  }

  double spectral_radius() const { return g1dbn::spectral_radius(a_); }
  bool is_stable() const { return spectral_radius() < 1.0; }

 private:
  Matrix a_;
  Vector b_;
  Matrix sigma_;
};

/// A directed edge X^parent_{t-1} -> X^child_t (0-based indices).
struct Edge {
  std::size_t parent = 0;
  std::size_t child = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Set of directed edges between consecutive time slices over p variables.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t p) : p_(p) {}
  EdgeSet(std::size_t p, std::initializer_list<Edge> edges) : p_(p) {
    for (const auto& e : edges) insert(e);
  }

  void insert(Edge e) {
    if (e.parent >= p_ || e.child >= p_) {
      throw Error(ErrorKind::InvalidArgument,
                  "edge index out of range for p = " + std::to_string(p_),
                  static_cast<long long>(e.parent),
                  static_cast<long long>(e.child));
    }
    edges_.insert(e);
  }

  bool contains(Edge e) const { return edges_.count(e) != 0; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  std::size_t p() const noexcept { return p_; }
  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  /// Parents of `child`, ascending.
  std::vector<std::size_t> parents_of(std::size_t child) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges_)
      if (e.child == child) out.push_back(e.parent);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::size_t> in_degrees() const {
    std::vector<std::size_t> deg(p_, 0);
    for (const auto& e : edges_) ++deg[e.child];
    return deg;
  }

  std::size_t max_in_degree() const {
    const auto deg = in_degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }

  bool is_subset_of(const EdgeSet& other) const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [&](const Edge& e) { return other.contains(e); });
  }

  friend bool operator==(const EdgeSet& lhs, const EdgeSet& rhs) {
    return lhs.p_ == rhs.p_ && lhs.edges_ == rhs.edges_;
  }

 private:
  std::size_t p_ = 0;
  std::set<Edge> edges_;
};

/// p x p edge scores in [0, 1]; entry (i, j) scores X^j_{t-1} -> X^i_t
/// (row = child, column = parent). Lower means stronger evidence.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(Matrix scores) : scores_(std::move(scores)) {
    if (scores_.rows() != scores_.cols() || scores_.rows() < 1) {
      throw Error(ErrorKind::InvalidArgument, "score matrix must be square");
    }
    for (Eigen::Index i = 0; i < scores_.rows(); ++i) {
      for (Eigen::Index j = 0; j < scores_.cols(); ++j) {
        const double s = scores_(i, j);
        if (!(s >= 0.0 && s <= 1.0)) {
          throw Error(ErrorKind::InvalidArgument,
                      "score outside [0, 1] at child " + std::to_string(i + 1) +
                          ", parent " + std::to_string(j + 1),
                      i, j);
        }
      }
    }
  }

  static ScoreMatrix ones(Eigen::Index p) {
    return ScoreMatrix(Matrix::Ones(p, p));
  }

  /// Edges score 0, everything else 1.
  static ScoreMatrix from_edges(const EdgeSet& edges) {
    const auto p = static_cast<Eigen::Index>(edges.p());
    Matrix s = Matrix::Ones(p, p);
    for (const auto& e : edges)
      s(static_cast<Eigen::Index>(e.child), static_cast<Eigen::Index>(e.parent)) = 0.0;
    return ScoreMatrix(std::move(s));
  }

  double operator()(std::size_t child, std::size_t parent) const {
    return scores_(static_cast<Eigen::Index>(child),
                   static_cast<Eigen::Index>(parent));
  }
  double at(Edge e) const { return (*this)(e.child, e.parent); }
  const Matrix& matrix() const noexcept { return scores_; }
  std::size_t p() const noexcept { return static_cast<std::size_t>(scores_.rows()); }

 private:
  Matrix scores_;
};

enum class Estimator { LS, Huber, Tukey };

inline const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::LS: return "ls";
    case Estimator::Huber: return "huber";
    case Estimator::Tukey: return "tukey";
  }
  return "ls";
}

struct InferenceConfig {
  Estimator estimator = Estimator::LS;
  double alpha1 = 0.7;
  double alpha2 = 0.05;
  /// When set, final edges are chosen by Benjamini-Hochberg at this level
  /// instead of thresholding at alpha2.
  std::optional<double> fdr_level;
  double huber_k = 1.345;
  double tukey_c = 4.685;
  double irls_tol = 1e-6;
  int irls_max_iter = 50;
  /// Worker count for the per-target loops; never changes results.
  unsigned threads = 1;

  void validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit(alpha1))
      throw Error(ErrorKind::InvalidArgument, "alpha1 must lie in (0, 1]");
    if (!in_unit(alpha2))
      throw Error(ErrorKind::InvalidArgument, "alpha2 must lie in (0, 1]");
    if (fdr_level && !(*fdr_level > 0.0 && *fdr_level < 1.0))
      throw Error(ErrorKind::InvalidArgument, "fdr level must lie in (0, 1)");
    if (!(huber_k > 0.0) || !(tukey_c > 0.0))
      throw Error(ErrorKind::InvalidArgument, "tuning constants must be > 0");
    if (!(irls_tol > 0.0) || irls_max_iter < 1)
      throw Error(ErrorKind::InvalidArgument, "invalid IRLS settings");
  }
};

}  // namespace g1dbn
