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
#include <cstddef>
#include <tuple>
#include <vector>

#include "g1dbn/core.hpp"

namespace g1dbn {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  double precision() const {
    return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  double recall() const {
    return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Counts over all p^2 ordered pairs, self-loops included.
inline ConfusionCounts confusion(const EdgeSet& predicted, const EdgeSet& truth,
                                 std::size_t p) {
  for (const auto* set : {&predicted, &truth})
    for (const auto& e : *set)
      if (e.parent >= p || e.child >= p)
        throw Error(ErrorKind::InvalidArgument, "edge index out of range");
  ConfusionCounts c;
  for (const auto& e : predicted) {
    if (truth.contains(e)) ++c.tp; else ++c.fp;
  }
  c.fn = truth.size() - c.tp;
  c.tn = p * p - c.tp - c.fp - c.fn;
  return c;
}

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double threshold = 0.0;
};

/// One point per prefix of the score-ordered edge list (first point = first
/// selected edge).
struct PRCurve {
  std::vector<PRPoint> points;
};

/// Orders all p^2 candidate edges by ascending score, ties broken by child
/// then parent index, and reports precision/recall after each inclusion.
inline PRCurve pr_curve(const ScoreMatrix& scores, const EdgeSet& truth) {
  if (truth.empty()) {
    throw Error(ErrorKind::EmptyTruth, "recall is undefined without true edges");
  }
  const auto p = scores.p();
  if (truth.p() != p) {
    throw Error(ErrorKind::InvalidArgument,
                "truth dimension does not match the score matrix");
  }
  struct Ranked {
    double score;
    std::size_t child;
    std::size_t parent;
  };
  std::vector<Ranked> order;
  order.reserve(p * p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) order.push_back({scores(i, j), i, j});
  std::sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.score, a.child, a.parent) < std::tie(b.score, b.child, b.parent);
  });

  PRCurve curve;
  curve.points.reserve(order.size());
  std::size_t tp = 0;
  const double total = static_cast<double>(truth.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (truth.contains({order[k].parent, order[k].child})) ++tp;
    curve.points.push_back({static_cast<double>(tp) / total,
                            static_cast<double>(tp) / static_cast<double>(k + 1),
                            order[k].score});
  }
  return curve;
}

/// Right-continuous step integral of precision over recall:
/// sum_k (r_k - r_{k-1}) * precision_k with r_0 = 0.
inline double auc_pr(const PRCurve& curve) {
  if (curve.points.empty()) {
    throw Error(ErrorKind::InvalidArgument, "empty precision-recall curve");
  }
  double area = 0.0;
  double prev_recall = 0.0;
  for (const auto& pt : curve.points) {
    area += (pt.recall - prev_recall) * pt.precision;
    prev_recall = pt.recall;
  }
  return area;
}

/// Precision at the shortest prefix reaching at least `recall`, or 0 when
/// the curve never gets there.
inline double precision_at_recall(const PRCurve& curve, double recall) {
  for (const auto& pt : curve.points)
    if (pt.recall >= recall - 1e-12) return pt.precision;
  return 0.0;
}

}  // namespace g1dbn
