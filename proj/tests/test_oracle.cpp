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

#include <cmath>

#include <gtest/gtest.h>

#include "g1dbn/g1dbn.hpp"
#include "model_gen.hpp"
#include "oracles.hpp"

using namespace g1dbn;
using oracle_ref::random_indegree_model;

TEST(Lyapunov, NoDynamicsGivesSigma) {
  Matrix sigma(2, 2);
  sigma << 1.0, 0.2, 0.2, 0.5;
  const AR1Model model(Matrix::Zero(2, 2), Vector::Zero(2), sigma);
  EXPECT_EQ(stationary_covariance(model), sigma);
}

TEST(Lyapunov, ScalarClosedForm) {
  const auto model = AR1Model::with_diagonal(Matrix::Constant(1, 1, 0.5),
                                             Vector::Zero(1), Vector::Constant(1, 0.04));
  EXPECT_NEAR(stationary_covariance(model)(0, 0), 0.04 / 0.75, 1e-15);
}

TEST(Lyapunov, MatchesKroneckerSolve) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto model = random_indegree_model(3 + static_cast<Eigen::Index>(seed % 6), 3, seed);
    const Matrix gamma = stationary_covariance(model);
    EXPECT_LT(lyapunov_residual(model, gamma), 1e-12);
    const Matrix ref = oracle_ref::kronecker_lyapunov(model.a(), model.sigma());
    EXPECT_LT((gamma - ref).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  }
}

TEST(Lyapunov, NearUnitRootConverges) {
  const auto model = AR1Model::with_diagonal(Matrix::Constant(1, 1, 0.999),
                                             Vector::Zero(1), Vector::Constant(1, 1.0));
  const Matrix gamma = stationary_covariance(model);
  EXPECT_NEAR(gamma(0, 0), 1.0 / (1.0 - 0.999 * 0.999), 1e-9);
  EXPECT_LT(lyapunov_residual(model, gamma), 1e-12);
}

TEST(Lyapunov, UnstableRejected) {
  const auto model = AR1Model::with_diagonal(Matrix::Constant(1, 1, 1.2),
                                             Vector::Zero(1), Vector::Ones(1));
  try {
    stationary_covariance(model);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unstable);
    EXPECT_DOUBLE_EQ(e.value(), 1.2);
  }
  EXPECT_THROW(population_gq(model, 0), Error);
}

TEST(JointCovariance, Blocks) {
  const auto model = random_indegree_model(4, 2, 7);
  const Matrix joint = joint_lag_covariance(model);
  const Matrix gamma = stationary_covariance(model);
  EXPECT_EQ(joint.topLeftCorner(4, 4), gamma);
  EXPECT_EQ(joint.bottomRightCorner(4, 4), gamma);
  EXPECT_EQ(joint.topRightCorner(4, 4), model.a() * gamma);
  EXPECT_EQ(joint.bottomLeftCorner(4, 4), (model.a() * gamma).transpose());
}

TEST(PartialCovariance, EmptySetIsPlainCovariance) {
  const auto model = random_indegree_model(4, 2, 3);
  const Matrix joint = joint_lag_covariance(model);
  const Matrix cross = model.a() * stationary_covariance(model);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_EQ(partial_covariance(joint, i, j, {}),
                cross(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
}

TEST(PartialCovariance, IndependentComponentsVanish) {
  Vector d(3);
  d << 0.5, -0.3, 0.8;
  const auto model = AR1Model::with_diagonal(Matrix(d.asDiagonal()), Vector::Zero(3), Vector::Ones(3));
  const Matrix joint = joint_lag_covariance(model);
  EXPECT_EQ(partial_covariance(joint, 0, 1, {}), 0.0);
  EXPECT_NEAR(partial_covariance(joint, 0, 1, {2}), 0.0, 1e-15);
  EXPECT_GT(std::fabs(partial_covariance(joint, 0, 0, {1, 2})), 0.1);
}

// Given all other lagged variables, the partial covariance of X^i_t and
// X^j_{t-1} is a_ij times the residual variance of X^j_{t-1}.
TEST(PartialCovariance, FullOrderVanishesExactlyOnZeroCoefficients) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto model = random_indegree_model(4, 3, 500 + seed);
    const Matrix joint = joint_lag_covariance(model);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < 4; ++k)
          if (k != j) rest.push_back(k);
        const double pc = partial_covariance(joint, i, j, rest);
        const double a = model.a()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (a == 0.0)
          EXPECT_LT(std::fabs(pc), 1e-12);
        else
          EXPECT_GT(std::fabs(pc), 1e-6);
      }
  }
}

TEST(PartialCovariance, SingularConditioning) {
  Matrix joint = Matrix::Identity(6, 6);
  joint(4, 4) = 0.0;  // lagged variable 2 has no variance
  EXPECT_THROW(partial_covariance(joint, 0, 0, {1, 2}), Error);
  try {
    partial_covariance(joint, 0, 0, {2});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularConditioning);
  }
}

TEST(Gmin, Basic) {
  EXPECT_TRUE(population_gmin(AR1Model::with_diagonal(Matrix::Zero(3, 3), Vector::Zero(3),
                                                      Vector::Ones(3)))
                  .empty());
  const auto diag = AR1Model::with_diagonal(Matrix(Vector::Constant(3, 0.4).asDiagonal()),
                                            Vector::Zero(3), Vector::Ones(3));
  EXPECT_EQ(population_gmin(diag), EdgeSet(3, {{0, 0}, {1, 1}, {2, 2}}));
  const auto model = random_ar1_model(50, 0.05, 9);
  EXPECT_EQ(population_gmin(model).size(),
            static_cast<std::size_t>((model.a().array() != 0.0).count()));
}

TEST(Gq, DiagonalModelSelfLoopsOnly) {
  const auto diag = AR1Model::with_diagonal(Matrix(Vector::Constant(4, 0.4).asDiagonal()),
                                            Vector::Zero(4), Vector::Ones(4));
  for (std::size_t q = 0; q < 4; ++q)
    EXPECT_EQ(population_gq(diag, q), population_gmin(diag));
}

TEST(Gq, FullOrderIsMinimalGraph) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::Index p = 3 + static_cast<Eigen::Index>(seed % 4);
    const auto model = random_indegree_model(p, 3, 900 + seed);
    EXPECT_EQ(population_gq(model, static_cast<std::size_t>(p - 1)), population_gmin(model));
  }
}

TEST(Gq, SecondOrderRecoversInDegreeTwo) {
  const auto model = random_indegree_model(5, 2, 41);
  EXPECT_LE(population_gmin(model).max_in_degree(), 2u);
  EXPECT_EQ(population_gq(model, 2), population_gmin(model));
}

TEST(Gq, ThreadsDoNotMatter) {
  const auto model = random_indegree_model(7, 3, 2);
  EXPECT_EQ(population_gq(model, 2, kOracleTolerance, kDefaultOracleBudget, 4),
            population_gq(model, 2));
}

TEST(Gq, ArgumentChecks) {
  const auto model = random_indegree_model(4, 2, 1);
  EXPECT_THROW(population_gq(model, 4), Error);
  try {
    population_gq(random_indegree_model(12, 2, 1), 5, kOracleTolerance, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    EXPECT_EQ(e.value(), binomial(11, 5) * 144.0);
  }
}

TEST(Subsets, EnumeratesInOrder) {
  std::vector<std::vector<std::size_t>> seen;
  for_each_subset({1, 3, 5, 7}, 2, [&](const auto& s) {
    seen.push_back(s);
    return true;
  });
  const std::vector<std::vector<std::size_t>> expected = {
      {1, 3}, {1, 5}, {1, 7}, {3, 5}, {3, 7}, {5, 7}};
  EXPECT_EQ(seen, expected);
  int calls = 0;
  for_each_subset({1, 2, 3}, 0, [&](const auto& s) {
    EXPECT_TRUE(s.empty());
    ++calls;
    return true;
  });
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(binomial(7, 3), 35.0);
}

// Properties over continuously drawn (hence faithful with probability one)
// models.

TEST(OracleProperties, InDegreeOneFirstOrderIsExact) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto model = random_indegree_model(4 + static_cast<Eigen::Index>(seed % 5), 1, seed);
    EXPECT_EQ(population_gq(model, 1), population_gmin(model)) << "seed " << seed;
  }
}

TEST(OracleProperties, LowOrderGraphsInsideMinimalWhenInDegreeBounded) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto model = random_indegree_model(4 + static_cast<Eigen::Index>(seed % 5), 2, 1000 + seed);
    const auto gmin = population_gmin(model);
    const auto q = gmin.max_in_degree();
    if (q >= static_cast<std::size_t>(model.p())) continue;
    EXPECT_TRUE(population_gq(model, std::max<std::size_t>(q, 1)).is_subset_of(gmin));
    EXPECT_EQ(population_gq(model, 2), gmin);
  }
}

TEST(OracleProperties, MinimalGraphInsideEveryOrder) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Eigen::Index p = 4 + static_cast<Eigen::Index>(seed % 5);
    const auto model = random_indegree_model(p, 4, 2000 + seed);
    const auto gmin = population_gmin(model);
    for (std::size_t q = 0; q < static_cast<std::size_t>(p); ++q)
      EXPECT_TRUE(gmin.is_subset_of(population_gq(model, q))) << "seed " << seed << " q " << q;
  }
}

TEST(OracleProperties, FewParentsInGqMeansExact) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Eigen::Index p = 4 + static_cast<Eigen::Index>(seed % 3);
    const auto model = random_indegree_model(p, 3, 3000 + seed);
    for (std::size_t q = 1; q < static_cast<std::size_t>(p); ++q) {
      const auto gq = population_gq(model, q);
      if (gq.max_in_degree() <= q) {
        EXPECT_EQ(gq, population_gmin(model));
      }
    }
  }
}

TEST(OracleProperties, MotifProducesSpuriousEdge) {
  const auto model = oracle_ref::motif_model();
  const auto gmin = population_gmin(model);
  EXPECT_EQ(gmin, EdgeSet(3, {{0, 0}, {1, 0}, {0, 1}, {1, 2}}));
  const auto g1 = population_gq(model, 1);
  EXPECT_TRUE(g1.contains({2, 0}));
  EXPECT_TRUE(gmin.is_subset_of(g1));
  EXPECT_EQ(g1.size(), gmin.size() + 1);
  EXPECT_EQ(population_gq(model, 2), gmin);
}

// Unfaithful parameters: a sink node whose two parents cancel in the
// marginal covariance. The edge 1 -> 3 is in the minimal graph but missing
// from the zero-order graph, so containment is not unconditional.
TEST(OracleProperties, UnfaithfulCancellationBreaksContainment) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 0.5;
  a(1, 0) = 0.6;
  a(1, 1) = 0.3;
  const auto base = AR1Model::with_diagonal(a, Vector::Zero(3), Vector::Ones(3));
  const Matrix gamma = stationary_covariance(base);
  a(2, 0) = 0.4;
  a(2, 1) = -0.4 * gamma(0, 0) / gamma(1, 0);
  const auto model = AR1Model::with_diagonal(a, Vector::Zero(3), Vector::Ones(3));
  const auto gmin = population_gmin(model);
  EXPECT_TRUE(gmin.contains({0, 2}));
  EXPECT_FALSE(population_gq(model, 0).contains({0, 2}));
  EXPECT_FALSE(gmin.is_subset_of(population_gq(model, 0)));
}
