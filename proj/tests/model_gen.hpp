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
#include <numeric>
#include <random>
#include <vector>

#include "g1dbn/g1dbn.hpp"

namespace g1dbn::oracle_ref {

/// Stable AR(1) model with diagonal Sigma whose nodes each get between 0
/// and `max_parents` parents (self included as a candidate). All nonzero
/// parameters are continuous draws; A is rescaled to spectral radius <= 0.9.
inline AR1Model random_indegree_model(Eigen::Index p, int max_parents,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(0, max_parents);
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::uniform_real_distribution<double> var(0.5, 1.5);
  std::bernoulli_distribution neg(0.5);
  Matrix a = Matrix::Zero(p, p);
  std::vector<Eigen::Index> nodes(static_cast<std::size_t>(p));
  std::iota(nodes.begin(), nodes.end(), 0);
  for (Eigen::Index i = 0; i < p; ++i) {
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const int k = count(rng);
    for (int c = 0; c < k; ++c) {
      const double v = mag(rng);
      a(i, nodes[static_cast<std::size_t>(c)]) = neg(rng) ? -v : v;
    }
  }
  const double rho = spectral_radius(a);
  if (rho > 0.9) a *= 0.9 / rho;
  Vector variances(p);
  for (Eigen::Index i = 0; i < p; ++i) variances(i) = var(rng);
  return AR1Model::with_diagonal(a, Vector::Zero(p), variances);
}

/// Three-node motif: 1 -> 1, 2 -> 1, 1 -> 2, 2 -> 3 (1-based).
inline AR1Model motif_model() {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 0.45;
  a(0, 1) = 0.55;
  a(1, 0) = -0.6;
  a(2, 1) = 0.7;
  return AR1Model::with_diagonal(a, Vector::Zero(3), Vector::Ones(3));
}

}  // namespace g1dbn::oracle_ref
