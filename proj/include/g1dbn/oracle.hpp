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

/** @file
 * Exact population quantities of a stationary Gaussian AR(1) process.
 *
 * For Gaussian processes conditional independence of X^i_t and X^j_{t-1}
 * given a set of lagged variables is equivalent to a zero partial
 * covariance, so the minimal graph and every q-th order dependence graph
 * can be computed from the stationary second moments alone.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g1dbn/core.hpp"
#include "g1dbn/parallel.hpp"

namespace g1dbn {

inline constexpr double kOracleTolerance = 1e-9;
inline constexpr double kLyapunovTolerance = 1e-14;
inline constexpr int kLyapunovMaxIter = 100000;
inline constexpr std::uint64_t kDefaultOracleBudget = 50'000'000;

namespace detail {

inline void require_stable(const AR1Model& model) {
  const double rho = model.spectral_radius();
  if (!(rho < 1.0)) {
    throw Error(ErrorKind::Unstable,
                "spectral radius " + std::to_string(rho) + " is not below 1",
                -1, -1, rho);
  }
}

}  // namespace detail

/// Stationary covariance: the fixed point Gamma = A Gamma A' + Sigma.
/// Iterates the doubling form of the fixed-point map
/// (Gamma += A_k Gamma A_k', A_{k+1} = A_k^2), which sums the same series
/// as the plain iteration in logarithmically many steps, then polishes with
/// plain fixed-point steps.
inline Matrix stationary_covariance(const AR1Model& model) {
  detail::require_stable(model);
  const Matrix& a = model.a();
  Matrix gamma = model.sigma();
  Matrix power = a;
  for (int iter = 0; iter < kLyapunovMaxIter; ++iter) {
    const Matrix increment = power * gamma * power.transpose();
    gamma += increment;
    power = power * power;
    if (increment.cwiseAbs().maxCoeff() <=
        kLyapunovTolerance * std::max(1.0, gamma.cwiseAbs().maxCoeff()))
      break;
  }
  for (int iter = 0; iter < kLyapunovMaxIter; ++iter) {
    Matrix next = a * gamma * a.transpose() + model.sigma();
    next = 0.5 * (next + next.transpose());
    const double change = (next - gamma).cwiseAbs().maxCoeff();
    gamma = std::move(next);
    if (change <= kLyapunovTolerance) break;
  }
  return gamma;
}

/// max |Gamma - A Gamma A' - Sigma|.
inline double lyapunov_residual(const AR1Model& model, const Matrix& gamma) {
  return (gamma - model.a() * gamma * model.a().transpose() - model.sigma())
      .cwiseAbs()
      .maxCoeff();
}

/// Covariance of the stacked 2p-vector (X_t, X_{t-1}) at stationarity:
/// [Gamma, A Gamma; Gamma A', Gamma].
inline Matrix joint_lag_covariance(const AR1Model& model) {
  const Matrix gamma = stationary_covariance(model);
  const auto p = model.p();
  Matrix joint(2 * p, 2 * p);
  const Matrix cross = model.a() * gamma;
  joint.topLeftCorner(p, p) = gamma;
  joint.topRightCorner(p, p) = cross;
  joint.bottomLeftCorner(p, p) = cross.transpose();
  joint.bottomRightCorner(p, p) = gamma;
  return joint;
}

/// Partial covariance of X^target_t and X^candidate_{t-1} given
/// {X^k_{t-1} : k in conditioning}, by Schur complement of `joint`
/// (as built by joint_lag_covariance).
inline double partial_covariance(const Matrix& joint, std::size_t target,
                                 std::size_t candidate,
                                 const std::vector<std::size_t>& conditioning) {
  const auto p = joint.rows() / 2;
  if (joint.rows() != joint.cols() || joint.rows() % 2 != 0 ||
      target >= static_cast<std::size_t>(p) ||
      candidate >= static_cast<std::size_t>(p)) {
    throw Error(ErrorKind::InvalidArgument, "partial covariance index error");
  }
  const auto ti = static_cast<Eigen::Index>(target);
  const auto cj = p + static_cast<Eigen::Index>(candidate);
  const double base = joint(ti, cj);
  if (conditioning.empty()) return base;

  const auto q = static_cast<Eigen::Index>(conditioning.size());
  Matrix cond(q, q);
  Vector left(q);
  Vector right(q);
  for (Eigen::Index r = 0; r < q; ++r) {
    const auto k = conditioning[static_cast<std::size_t>(r)];
    if (k == candidate || k >= static_cast<std::size_t>(p)) {
      throw Error(ErrorKind::InvalidArgument,
                  "conditioning set must exclude the candidate");
    }
    const auto kr = p + static_cast<Eigen::Index>(k);
    left(r) = joint(ti, kr);
    right(r) = joint(kr, cj);
    for (Eigen::Index c = 0; c < q; ++c) {
      cond(r, c) = joint(kr, p + static_cast<Eigen::Index>(
                                     conditioning[static_cast<std::size_t>(c)]));
    }
  }
  Eigen::LDLT<Matrix> ldlt(cond);
  const double diag_max = cond.diagonal().cwiseAbs().maxCoeff();
  const Vector d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(diag_max > 0.0) ||
      d.minCoeff() <= 1e-13 * diag_max) {
    throw Error(ErrorKind::SingularConditioning,
                "conditioning covariance is singular");
  }
  return base - left.dot(ldlt.solve(right));
}

/// Minimal graph of an AR(1) model: {(j -> i) : |a_ij| > tol}.
inline EdgeSet population_gmin(const AR1Model& model,
                               double tol = kOracleTolerance) {
  const auto p = static_cast<std::size_t>(model.p());
  EdgeSet out(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (std::fabs(model.a()(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(j))) > tol)
        out.insert({j, i});
  return out;
}

inline double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

/// Calls fn(subset) for every size-q subset of `items`, in lexicographic
/// order of positions. Stops early when fn returns false.
template <typename Fn>
bool for_each_subset(const std::vector<std::size_t>& items, std::size_t q,
                     Fn&& fn) {
  const auto n = items.size();
  if (q > n) return true;
  std::vector<std::size_t> idx(q);
  for (std::size_t i = 0; i < q; ++i) idx[i] = i;
  std::vector<std::size_t> subset(q);
  while (true) {
    for (std::size_t i = 0; i < q; ++i) subset[i] = items[idx[i]];
    if (!fn(subset)) return false;
    std::size_t i = q;
    while (i > 0 && idx[i - 1] == n - q + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// q-th order dependence graph: (j -> i) is kept iff the partial covariance
/// of X^i_t and X^j_{t-1} stays above `tol` in magnitude given every size-q
/// subset of the other lagged variables.
inline EdgeSet population_gq(const AR1Model& model, std::size_t q,
                             double tol = kOracleTolerance,
                             std::uint64_t budget = kDefaultOracleBudget,
                             unsigned threads = 1) {
  const auto p = static_cast<std::size_t>(model.p());
  if (q + 1 > p) {
    throw Error(ErrorKind::InvalidArgument,
                "q must lie in [0, p - 1]", static_cast<long long>(q));
  }
  const double work = static_cast<double>(binomial(p - 1, q)) *
                      static_cast<double>(p) * static_cast<double>(p);
  if (work > static_cast<double>(budget)) {
    throw Error(ErrorKind::BudgetExceeded,
                "C(p-1, q) * p^2 = " + std::to_string(work) +
                    " exceeds the budget " + std::to_string(budget),
                -1, static_cast<long long>(budget), work);
  }
  const Matrix joint = joint_lag_covariance(model);
  std::vector<char> keep(p * p, 0);
  parallel_for(p * p, threads, [&](std::size_t cell) {
    const std::size_t i = cell / p;
    const std::size_t j = cell % p;
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < p; ++k)
      if (k != j) others.push_back(k);
    keep[cell] = for_each_subset(others, q, [&](const auto& subset) {
      return std::fabs(partial_covariance(joint, i, j, subset)) > tol;
    });
  });
  EdgeSet out(p);
  for (std::size_t cell = 0; cell < p * p; ++cell)
    if (keep[cell]) out.insert({cell % p, cell / p});
  return out;
}

}  // namespace g1dbn
