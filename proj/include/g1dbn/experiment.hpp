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
 * Replicated simulate / infer / evaluate runs, averaged into one precision
 * curve per step.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "g1dbn/core.hpp"
#include "g1dbn/eval.hpp"
#include "g1dbn/inference.hpp"
#include "g1dbn/oracle.hpp"
#include "g1dbn/parallel.hpp"
#include "g1dbn/simulate.hpp"

namespace g1dbn {

/// What a replicate does when step 1 leaves a target with more than n - 3
/// parents: raise TooManyParents, or lower alpha1 for that replicate to
/// max_feasible_alpha1 and continue.
enum class OverflowPolicy { Fail, Tighten };

struct ExperimentConfig {
  Eigen::Index p = 50;
  Eigen::Index n = 20;
  double density = 0.05;
  std::size_t replicates = 50;
  std::uint64_t seed = 1;
  NoiseSpec noise = NoiseSpec::gaussian();
  double sigma_offdiag = 0.0;
  bool require_stable = false;
  Eigen::Index burn_in = 0;
  InferenceConfig inference;
  OverflowPolicy overflow = OverflowPolicy::Tighten;
  /// Replicates run concurrently; inference inside each replicate is serial.
  unsigned threads = 1;
};

/// Recall levels 0.01, 0.02, ..., 1.00.
inline std::vector<double> default_recall_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(k / 100.0);
  return grid;
}

struct ReplicateOutcome {
  std::size_t true_edges = 0;
  std::size_t step1_edges = 0;
  double alpha1_requested = 0.0;
  double alpha1_used = 0.0;
  double auc_step1 = 0.0;
  double auc_step2 = 0.0;
  std::vector<double> precision_step1;  // on the recall grid
  std::vector<double> precision_step2;
  ConfusionCounts final_counts;
};

struct ExperimentSummary {
  std::vector<double> recall_grid;
  std::vector<ReplicateOutcome> replicates;
  std::vector<double> mean_precision_step1;
  std::vector<double> mean_precision_step2;
  double mean_auc_step1 = 0.0;
  double mean_auc_step2 = 0.0;

  /// Mean precision at the grid level closest to `recall`.
  double mean_precision_at(double recall, bool step2 = true) const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < recall_grid.size(); ++k)
      if (std::fabs(recall_grid[k] - recall) < std::fabs(recall_grid[best] - recall)) best = k;
    return (step2 ? mean_precision_step2 : mean_precision_step1)[best];
  }
  std::size_t tightened() const {
    std::size_t count = 0;
    for (const auto& r : replicates)
      if (r.alpha1_used < r.alpha1_requested) ++count;
    return count;
  }
  /// Fraction of replicates whose step-2 AUC is strictly above step 1.
  double strict_improvement_rate() const {
    std::size_t better = 0;
    for (const auto& r : replicates)
      if (r.auc_step2 > r.auc_step1) ++better;
    return replicates.empty() ? 0.0
                              : static_cast<double>(better) / static_cast<double>(replicates.size());
  }
};

/// Model and series of replicate `r`; seeds come from streams 0 and 1.
inline AR1Model experiment_model(const ExperimentConfig& cfg, std::size_t r) {
  RandomModelOptions opts;
  opts.require_stable = cfg.require_stable;
  opts.offdiag_sigma_density = cfg.sigma_offdiag;
  return random_ar1_model(cfg.p, cfg.density, derive_seed(cfg.seed, r, 0), opts);
}

inline TimeSeries experiment_series(const ExperimentConfig& cfg, const AR1Model& model,
                                    std::size_t r) {
  return simulate_series(model, cfg.n, derive_seed(cfg.seed, r, 1), cfg.noise, cfg.burn_in);
}

/// Simulates, infers and scores every replicate. A replicate whose true
/// graph is empty raises EmptyTruth. Averages are accumulated in replicate
/// order, so the thread count does not change them.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                        std::vector<double> recall_grid = default_recall_grid()) {
  if (cfg.replicates == 0)
    throw Error(ErrorKind::InvalidArgument, "at least one replicate is required");
  ExperimentSummary out;
  out.recall_grid = std::move(recall_grid);
  out.replicates.resize(cfg.replicates);
  InferenceConfig inference = cfg.inference;
  inference.threads = 1;

  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    const auto model = experiment_model(cfg, r);
    const auto ts = experiment_series(cfg, model, r);
    const auto truth = population_gmin(model);
    const auto s1 = step1_scores(ts, inference);
    InferenceConfig local = inference;
    if (cfg.overflow == OverflowPolicy::Tighten) {
      const double cap = max_feasible_alpha1(s1, ts.n());
      if (cap < local.alpha1 && cap > 0.0) local.alpha1 = cap;
    }
    const auto result = infer_from_step1(ts, s1, local);
    const auto c1 = pr_curve(result.s1, truth);
    const auto c2 = pr_curve(result.s2, truth);
    auto& o = out.replicates[r];
    o.true_edges = truth.size();
    o.step1_edges = result.g1hat.size();
    o.alpha1_requested = inference.alpha1;
    o.alpha1_used = local.alpha1;
    o.auc_step1 = auc_pr(c1);
    o.auc_step2 = auc_pr(c2);
    for (double level : out.recall_grid) {
      o.precision_step1.push_back(precision_at_recall(c1, level));
      o.precision_step2.push_back(precision_at_recall(c2, level));
    }
    o.final_counts = confusion(result.final_edges, truth, static_cast<std::size_t>(cfg.p));
  });

  const double count = static_cast<double>(cfg.replicates);
  out.mean_precision_step1.assign(out.recall_grid.size(), 0.0);
  out.mean_precision_step2.assign(out.recall_grid.size(), 0.0);
  for (const auto& o : out.replicates) {
    out.mean_auc_step1 += o.auc_step1 / count;
    out.mean_auc_step2 += o.auc_step2 / count;
    for (std::size_t k = 0; k < out.recall_grid.size(); ++k) {
      out.mean_precision_step1[k] += o.precision_step1[k] / count;
      out.mean_precision_step2[k] += o.precision_step2[k] / count;
    }
  }
  return out;
}

}  // namespace g1dbn
