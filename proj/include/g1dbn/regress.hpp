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
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "g1dbn/core.hpp"
#include "g1dbn/student_t.hpp"

namespace g1dbn {

/// One linear fit with intercept. `coefficients[0]` is the intercept;
/// `p_values[j]` tests `coefficients[j + 1]`.
struct RegressionFit {
  Vector coefficients;
  Vector std_errors;
  int dof = 0;
  Vector p_values;
  bool converged = true;
};

enum class MEstimator { Huber, Tukey };

inline constexpr double kDefaultHuberK = 1.345;
inline constexpr double kDefaultTukeyC = 4.685;
inline constexpr double kMadConsistency = 0.6745;
inline constexpr double kZeroScaleFallback = 1e-12;

/// IRLS weight for a standardized residual u.
inline double huber_weight(double u, double k) {
  const double a = std::fabs(u);
  return a <= k ? 1.0 : k / a;
}

inline double tukey_weight(double u, double c) {
  const double a = std::fabs(u);
  if (a >= c) return 0.0;
  const double r = u / c;
  const double s = 1.0 - r * r;
  return s * s;
}

namespace detail {

// Relative size below which a residual norm or a coefficient's
// contribution to the fit counts as exactly zero.
inline constexpr double kExactFitTolerance = 1e-12;
inline constexpr double kRankThreshold = 1e-10;

struct LinearSolution {
  Vector beta;
  Vector std_errors;
  double rss = 0.0;
};

// Least squares on a design that already contains the intercept column.
inline LinearSolution solve_design(const Matrix& design, const Vector& y) {
  const auto m = design.rows();
  const auto k = design.cols();
  if (m <= k) {
    throw Error(ErrorKind::TooFewRows,
                std::to_string(m) + " rows for " + std::to_string(k) +
                    " coefficients",
                m, k);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < k) {
    throw Error(ErrorKind::RankDeficient, "design matrix is rank deficient",
                qr.rank(), k);
  }
  LinearSolution out;
  out.beta = qr.solve(y);
  out.rss = (y - design * out.beta).squaredNorm();
  const double sigma2 = out.rss / static_cast<double>(m - k);

  const Matrix r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Matrix r_inv = r.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Vector permuted_diag = r_inv.rowwise().squaredNorm();
  out.std_errors.resize(k);
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index l = 0; l < k; ++l) {
    out.std_errors(perm(l)) = std::sqrt(sigma2 * permuted_diag(l));
  }
  return out;
}

inline Vector slope_p_values(const Matrix& design, const Vector& y,
                             const LinearSolution& sol, int dof) {
  const auto k = design.cols();
  Vector p(k - 1);
  const double y_scale = y.norm();
  const bool exact_fit =
      std::sqrt(sol.rss) <= kExactFitTolerance * y_scale || y_scale == 0.0;
  for (Eigen::Index j = 1; j < k; ++j) {
    if (exact_fit) {
      const double contribution = std::fabs(sol.beta(j)) * design.col(j).norm();
      p(j - 1) = contribution <= kExactFitTolerance * y_scale ? 1.0 : 0.0;
    } else {
      p(j - 1) = student_t_two_sided(sol.beta(j) / sol.std_errors(j), dof);
    }
  }
  return p;
}

inline Matrix with_intercept(const Matrix& x) {
  Matrix design(x.rows(), x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;
  return design;
}

inline int resolve_dof(std::optional<int> dof, Eigen::Index m, Eigen::Index k) {
  const int value = dof ? *dof : static_cast<int>(m - k);
  if (value < 1) {
    throw Error(ErrorKind::InvalidDof,
                "regression has " + std::to_string(value) +
                    " degrees of freedom",
                value);
  }
  return value;
}

inline double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Normalized median absolute deviation about the median.
inline double mad_scale(const Vector& residuals) {
  std::vector<double> r(residuals.data(), residuals.data() + residuals.size());
  const double med = detail::median(r);
  for (auto& v : r) v = std::fabs(v - med);
  return detail::median(std::move(r)) / kMadConsistency;
}

/// Ordinary least squares of y on [1 | x]. The t reference uses `dof` when
/// given, otherwise rows - columns - 1. The residual variance always uses
/// the unbiased rows - columns - 1 denominator.
inline RegressionFit fit_ls(const Vector& y, const Matrix& x,
                            std::optional<int> dof = std::nullopt) {
  if (y.size() != x.rows()) {
    throw Error(ErrorKind::InvalidArgument, "response/design row mismatch");
  }
  const Matrix design = detail::with_intercept(x);
  const auto sol = detail::solve_design(design, y);
  RegressionFit fit;
  fit.dof = detail::resolve_dof(dof, design.rows(), design.cols());
  fit.p_values = detail::slope_p_values(design, y, sol, fit.dof);
  fit.coefficients = sol.beta;
  fit.std_errors = sol.std_errors;
  fit.converged = true;
  return fit;
}

/// Huber or Tukey-bisquare M-estimate by IRLS, started from least squares.
/// The scale is re-estimated each iteration by the normalized MAD of the
/// residuals. Standard errors and p-values come from the last weighted fit.
/// Running out of iterations is not an error: `converged` is false and the
/// last iterate is returned.
inline RegressionFit fit_m_estimator(const Vector& y, const Matrix& x,
                                     MEstimator kind, double tuning,
                                     double tol = 1e-6, int max_iter = 50,
                                     std::optional<int> dof = std::nullopt) {
  if (y.size() != x.rows()) {
    throw Error(ErrorKind::InvalidArgument, "response/design row mismatch");
  }
  if (!(tuning > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tuning constant must be > 0");
  }
  const Matrix design = detail::with_intercept(x);
  const auto m = design.rows();
  RegressionFit fit;
  fit.dof = detail::resolve_dof(dof, m, design.cols());

  // Residual scales at roundoff level relative to the response count as
  // zero and are floored.
  const double scale_floor =
      kZeroScaleFallback *
      std::max(1.0, y.norm() / std::sqrt(static_cast<double>(m)));
  auto sol = detail::solve_design(design, y);
  Matrix weighted_design = design;
  Vector weighted_y = y;
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    const Vector residuals = y - design * sol.beta;
    double scale = mad_scale(residuals);
    if (!(scale > scale_floor)) scale = scale_floor;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double u = residuals(r) / scale;
      const double w = kind == MEstimator::Huber ? huber_weight(u, tuning)
                                                 : tukey_weight(u, tuning);
      const double sw = std::sqrt(w);
      weighted_design.row(r) = sw * design.row(r);
      weighted_y(r) = sw * y(r);
    }
    auto next = detail::solve_design(weighted_design, weighted_y);
    const double change = (next.beta - sol.beta).cwiseAbs().maxCoeff();
    sol = std::move(next);
    if (change < tol) {
      converged = true;
      break;
    }
  }
  fit.p_values = detail::slope_p_values(weighted_design, weighted_y, sol, fit.dof);
  fit.coefficients = sol.beta;
  fit.std_errors = sol.std_errors;
  fit.converged = converged;
  return fit;
}

/// Dispatches on the configured estimator.
inline RegressionFit fit(const Vector& y, const Matrix& x,
                         const InferenceConfig& cfg,
                         std::optional<int> dof = std::nullopt) {
  switch (cfg.estimator) {
    case Estimator::LS:
      return fit_ls(y, x, dof);
    case Estimator::Huber:
      return fit_m_estimator(y, x, MEstimator::Huber, cfg.huber_k,
                             cfg.irls_tol, cfg.irls_max_iter, dof);
    case Estimator::Tukey:
      return fit_m_estimator(y, x, MEstimator::Tukey, cfg.tukey_c,
                             cfg.irls_tol, cfg.irls_max_iter, dof);
  }
  return fit_ls(y, x, dof);
}

}  // namespace g1dbn
