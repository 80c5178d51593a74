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
 * Two-step inference of a dynamic Bayesian network from a short series.
 *
 * Step 1 scores every candidate edge X^j_{t-1} -> X^i_t by the largest
 * p-value of the partial coefficient of X^j_{t-1} over all regressions of
 * X^i_t on (X^j_{t-1}, X^k_{t-1}), k != j. Edges scoring below alpha1 form
 * the reduced graph. Step 2 regresses each target on all of its reduced
 * parents at once and keeps edges whose p-value is below alpha2, or those
 * selected by Benjamini-Hochberg when an FDR level is configured.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "g1dbn/core.hpp"
#include "g1dbn/parallel.hpp"
#include "g1dbn/regress.hpp"

namespace g1dbn {

namespace detail {

// p-value of the first slope, mapping collinear designs to "no evidence".
inline double first_slope_p_value(const Vector& y, const Matrix& x,
                                  const InferenceConfig& cfg, int dof) {
  try {
    return fit(y, x, cfg, dof).p_values(0);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::RankDeficient) return 1.0;
    throw;
  }
}

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold must lie in (0, 1]");
  }
}

}  // namespace detail

/// Step-1 scores of the incoming edges of one target: entry j is
/// max over k != j of p_{target j | k}, tested against t(n - 4).
inline Vector step1_row(const LaggedPairs& pairs, std::size_t target,
                        const InferenceConfig& cfg) {
  const auto p = pairs.predictors.cols();
  const auto m = pairs.predictors.rows();
  const int dof = static_cast<int>(m) - 3;  // n - 4
  const Vector y = pairs.responses.col(static_cast<Eigen::Index>(target));
  Vector row(p);
  Matrix x(m, 2);
  for (Eigen::Index j = 0; j < p; ++j) {
    double score = 0.0;
    x.col(0) = pairs.predictors.col(j);
    for (Eigen::Index k = 0; k < p; ++k) {
      if (k == j) continue;
      x.col(1) = pairs.predictors.col(k);
      score = std::max(score, detail::first_slope_p_value(y, x, cfg, dof));
    }
    row(j) = score;
  }
  return row;
}

inline Vector step1_row(const TimeSeries& ts, std::size_t target,
                        const InferenceConfig& cfg) {
  validate_timeseries(ts.data(), SeriesUse::Step1);
  cfg.validate();
  if (target >= static_cast<std::size_t>(ts.p())) {
    throw Error(ErrorKind::InvalidArgument, "target index out of range",
                static_cast<long long>(target));
  }
  return step1_row(lagged_pairs(ts), target, cfg);
}

/// Full Step-1 score matrix. Rows are computed independently (in parallel
/// when cfg.threads > 1); the result does not depend on scheduling.
inline ScoreMatrix step1_scores(const TimeSeries& ts, const InferenceConfig& cfg) {
  validate_timeseries(ts.data(), SeriesUse::Step1);
  cfg.validate();
  const auto pairs = lagged_pairs(ts);
  const auto p = static_cast<std::size_t>(ts.p());
  Matrix scores(ts.p(), ts.p());
  parallel_for(p, cfg.threads, [&](std::size_t i) {
    scores.row(static_cast<Eigen::Index>(i)) = step1_row(pairs, i, cfg).transpose();
  });
  return ScoreMatrix(std::move(scores));
}

/// {(j -> i) : S(i, j) < alpha}.
inline EdgeSet threshold_edges(const ScoreMatrix& s, double alpha) {
  detail::check_alpha(alpha);
  const auto p = s.p();
  EdgeSet out(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (s(i, j) < alpha) out.insert({j, i});
  return out;
}

/// Largest alpha1 whose reduced graph leaves every target at most n - 3
/// parents: the minimum over rows of the (n - 2)-th smallest score. Returns
/// 1 when no row can overflow.
inline double max_feasible_alpha1(const ScoreMatrix& s1, Eigen::Index n) {
  const auto p = s1.p();
  const auto cap = n - 3;
  if (cap < 0) throw Error(ErrorKind::TooFewTimePoints, "n must be >= 3", n);
  if (static_cast<Eigen::Index>(p) <= cap) return 1.0;
  double alpha = 1.0;
  std::vector<double> row(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) row[j] = s1(i, j);
    const auto kth = row.begin() + cap;
    std::nth_element(row.begin(), kth, row.end());
    alpha = std::min(alpha, *kth);
  }
  return alpha;
}

struct Step2Warning {
  std::size_t target = 0;
  std::string message;
};

struct Step2Result {
  ScoreMatrix scores;
  std::vector<Step2Warning> warnings;
};

inline std::string too_many_parents_advice(std::size_t target,
                                           std::size_t parents,
                                           Eigen::Index n) {
  return "target " + std::to_string(target + 1) + " has " +
         std::to_string(parents) + " parents after step 1 but at most " +
         std::to_string(n - 3) +
         " are supported with n = " + std::to_string(n) +
         "; choose a higher threshold (a more stringent, smaller alpha1) and "
         "rerun step 1";
}

/// Step-2 scores: each target with at least one reduced parent is regressed
/// on all of them; S2(i, j) is the p-value of the coefficient of X^j_{t-1}
/// against t(n - 1 - |pa(i)|). Edges outside `g1hat` score 1.
inline Step2Result step2_scores(const TimeSeries& ts, const EdgeSet& g1hat,
                                const InferenceConfig& cfg) {
  validate_timeseries(ts.data(), SeriesUse::Step1);
  cfg.validate();
  const auto p = static_cast<std::size_t>(ts.p());
  if (g1hat.p() != p) {
    throw Error(ErrorKind::InvalidArgument,
                "edge set dimension does not match the series");
  }
  const auto n = ts.n();
  std::vector<std::vector<std::size_t>> parents(p);
  for (std::size_t i = 0; i < p; ++i) {
    parents[i] = g1hat.parents_of(i);
    if (static_cast<Eigen::Index>(parents[i].size()) > n - 3) {
      throw Error(ErrorKind::TooManyParents,
                  too_many_parents_advice(i, parents[i].size(), n),
                  static_cast<long long>(i),
                  static_cast<long long>(parents[i].size()));
    }
  }

  const auto pairs = lagged_pairs(ts);
  const auto m = pairs.predictors.rows();
  Matrix scores = Matrix::Ones(ts.p(), ts.p());
  std::vector<std::optional<Step2Warning>> notes(p);
  parallel_for(p, cfg.threads, [&](std::size_t i) {
    const auto& pa = parents[i];
    if (pa.empty()) return;
    Matrix x(m, static_cast<Eigen::Index>(pa.size()));
    for (std::size_t l = 0; l < pa.size(); ++l)
      x.col(static_cast<Eigen::Index>(l)) =
          pairs.predictors.col(static_cast<Eigen::Index>(pa[l]));
    const Vector y = pairs.responses.col(static_cast<Eigen::Index>(i));
    const int dof = static_cast<int>(n - 1) - static_cast<int>(pa.size());
    try {
      const auto f = fit(y, x, cfg, dof);
      for (std::size_t l = 0; l < pa.size(); ++l)
        scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(pa[l])) =
            f.p_values(static_cast<Eigen::Index>(l));
      if (!f.converged) {
        notes[i] = Step2Warning{i, "IRLS did not converge for target " +
                                       std::to_string(i + 1)};
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankDeficient) throw;
      notes[i] = Step2Warning{i, "rank-deficient parent design for target " +
                                     std::to_string(i + 1) +
                                     "; its edges score 1"};
    }
  });

  Step2Result out{ScoreMatrix(std::move(scores)), {}};
  for (auto& note : notes)
    if (note) out.warnings.push_back(std::move(*note));
  return out;
}

struct BhSelection {
  EdgeSet edges;
  std::size_t tested = 0;
  std::size_t rejected = 0;
  /// Largest selected p-value, when anything is selected.
  std::optional<double> cutoff;
};

/// Benjamini-Hochberg step-up over the listed tests: with the p-values
/// sorted ascending, select the k smallest for
/// k = max{i : p_(i) <= i q / m}, m = number of listed tests.
inline BhSelection bh_select_detailed(
    const std::vector<std::pair<Edge, double>>& pvalues, double fdr_level,
    std::size_t p) {
  if (!(fdr_level > 0.0 && fdr_level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "fdr level must lie in (0, 1)");
  }
  auto sorted = pvalues;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second, a.first.child, a.first.parent) <
           std::tie(b.second, b.first.child, b.first.parent);
  });
  const auto m = sorted.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    if (sorted[i - 1].second <=
        static_cast<double>(i) / static_cast<double>(m) * fdr_level) {
      k = i;
    }
  }
  BhSelection out{EdgeSet(p), m, k, std::nullopt};
  for (std::size_t i = 0; i < k; ++i) out.edges.insert(sorted[i].first);
  if (k > 0) out.cutoff = sorted[k - 1].second;
  return out;
}

inline EdgeSet bh_select(const std::vector<std::pair<Edge, double>>& pvalues,
                         double fdr_level, std::size_t p) {
  return bh_select_detailed(pvalues, fdr_level, p).edges;
}

struct Alpha1GridPoint {
  double alpha = 0.0;
  std::size_t edges = 0;
  /// histogram[d] = number of targets with exactly d parents.
  std::vector<std::size_t> histogram;
  std::size_t zero_parents() const { return histogram.empty() ? 0 : histogram[0]; }
  std::size_t one_parent() const { return histogram.size() > 1 ? histogram[1] : 0; }
  std::size_t two_or_more() const {
    std::size_t c = 0;
    for (std::size_t d = 2; d < histogram.size(); ++d) c += histogram[d];
    return c;
  }
  /// One-parent targets outnumber multi-parent ones without exceeding the
  /// parentless ones.
  bool one_parent_predominates() const {
    return one_parent() >= two_or_more() && one_parent() <= zero_parents();
  }
};

struct Alpha1Selection {
  double alpha1 = 0.0;
  /// No grid point qualified, or the chosen one selects no edge at all.
  bool degenerate = false;
  std::vector<Alpha1GridPoint> report;
};

/// In-degree profile of the Step-1 graph at every grid value, plus an
/// automatic pick: the largest grid value whose profile has one-parent
/// targets predominating.
inline Alpha1Selection select_alpha1(const ScoreMatrix& s1,
                                     const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "alpha1 grid is empty");
  Alpha1Selection out;
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto edges = threshold_edges(s1, grid[g]);
    Alpha1GridPoint point;
    point.alpha = grid[g];
    point.edges = edges.size();
    point.histogram.assign(s1.p() + 1, 0);
    for (auto d : edges.in_degrees()) ++point.histogram[d];
    if (point.one_parent_predominates() &&
        (!best || grid[g] > out.report[*best].alpha)) {
      best = g;
    }
    out.report.push_back(std::move(point));
  }
  if (best) {
    out.alpha1 = out.report[*best].alpha;
    out.degenerate = out.report[*best].edges == 0;
  } else {
    out.alpha1 = *std::max_element(grid.begin(), grid.end());
    out.degenerate = true;
  }
  return out;
}

inline Alpha1Selection select_alpha1(const TimeSeries& ts,
                                     const std::vector<double>& grid,
                                     const InferenceConfig& cfg) {
  if (grid.empty()) throw Error(ErrorKind::EmptyGrid, "alpha1 grid is empty");
  for (double a : grid) detail::check_alpha(a);
  return select_alpha1(step1_scores(ts, cfg), grid);
}

struct InferenceResult {
  ScoreMatrix s1;
  EdgeSet g1hat;
  ScoreMatrix s2;
  EdgeSet final_edges;
  std::vector<Step2Warning> warnings;
  /// Set when the final edges came from Benjamini-Hochberg.
  std::optional<BhSelection> bh;
};

/// Steps 2 and final selection from an already computed Step-1 matrix.
inline InferenceResult infer_from_step1(const TimeSeries& ts, ScoreMatrix s1,
                                        const InferenceConfig& cfg) {
  cfg.validate();
  if (s1.p() != static_cast<std::size_t>(ts.p())) {
    throw Error(ErrorKind::InvalidArgument,
                "step-1 score dimension does not match the series");
  }
  auto g1hat = threshold_edges(s1, cfg.alpha1);
  auto step2 = step2_scores(ts, g1hat, cfg);
  std::optional<BhSelection> bh;
  EdgeSet final_edges;
  if (cfg.fdr_level) {
    std::vector<std::pair<Edge, double>> tests;
    tests.reserve(g1hat.size());
    for (const auto& e : g1hat) tests.emplace_back(e, step2.scores.at(e));
    bh = bh_select_detailed(tests, *cfg.fdr_level, g1hat.p());
    final_edges = bh->edges;
  } else {
    final_edges = threshold_edges(step2.scores, cfg.alpha2);
  }
  return {std::move(s1), std::move(g1hat), std::move(step2.scores),
          std::move(final_edges), std::move(step2.warnings), std::move(bh)};
}

inline InferenceResult infer(const TimeSeries& ts, const InferenceConfig& cfg) {
  return infer_from_step1(ts, step1_scores(ts, cfg), cfg);
}

}  // namespace g1dbn
