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
#include <random>

#include <gtest/gtest.h>

#include "g1dbn/regress.hpp"
#include "oracles.hpp"

using namespace g1dbn;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST(FitLs, ExactFitHasZeroPValue) {
  const Matrix x = column({1, 2, 3, 4, 5, 6});
  const Vector y = 2.0 * x.col(0);
  const auto f = fit_ls(y, x);
  EXPECT_NEAR(f.coefficients(1), 2.0, 1e-12);
  EXPECT_NEAR(f.coefficients(0), 0.0, 1e-12);
  EXPECT_EQ(f.p_values(0), 0.0);
  EXPECT_EQ(f.dof, 4);
}

TEST(FitLs, ConstantResponseHasUnitPValue) {
  const Matrix x = column({1, 2, 3, 4, 5, 6});
  const Vector y = Vector::Constant(6, 3.5);
  const auto f = fit_ls(y, x);
  EXPECT_NEAR(f.coefficients(1), 0.0, 1e-12);
  EXPECT_EQ(f.p_values(0), 1.0);
}

TEST(FitLs, MatchesNormalEquationsOnFivePoints) {
  const Matrix x = column({1, 2, 3, 4, 5});
  const Vector y = vec({1, 2, 2, 4, 5});
  const auto f = fit_ls(y, x);
  const auto o = oracle_ref::normal_equations_fit(y, x);
  // closed form: slope 1.0, intercept -0.2
  EXPECT_NEAR(static_cast<double>(o.beta[1]), 1.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(o.beta[0]), -0.2, 1e-15);
  for (int c = 0; c < 2; ++c) {
    EXPECT_NEAR(f.coefficients(c), static_cast<double>(o.beta[c]), 1e-12);
    EXPECT_NEAR(f.std_errors(c), static_cast<double>(o.std_errors[c]), 1e-12);
  }
  const double t = static_cast<double>(o.beta[1] / o.std_errors[1]);
  EXPECT_NEAR(f.p_values(0), oracle_ref::boost_t_two_sided(t, 3), 1e-12);
}

TEST(FitLs, RandomDesignsMatchNormalEquations) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 6 + trial % 10;
    const Eigen::Index d = 1 + trial % 3;
    Matrix x(m, d);
    Vector y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) x(r, c) = g(rng);
      y(r) = g(rng);
    }
    const auto f = fit_ls(y, x);
    const auto o = oracle_ref::normal_equations_fit(y, x);
    for (Eigen::Index c = 0; c <= d; ++c) {
      EXPECT_NEAR(f.coefficients(c), static_cast<double>(o.beta[static_cast<std::size_t>(c)]), 1e-10);
      EXPECT_NEAR(f.std_errors(c), static_cast<double>(o.std_errors[static_cast<std::size_t>(c)]), 1e-10);
    }
  }
}

TEST(FitLs, CallerSuppliedDof) {
  const Matrix x = column({1, 2, 3, 4, 5, 7, 6});
  const Vector y = vec({0.3, 1.1, 0.9, 2.5, 2.2, 3.9, 2.8});
  const auto conventional = fit_ls(y, x);
  const auto custom = fit_ls(y, x, 6);
  EXPECT_EQ(conventional.dof, 5);
  EXPECT_EQ(custom.dof, 6);
  const double t = custom.coefficients(1) / custom.std_errors(1);
  EXPECT_NEAR(custom.p_values(0), oracle_ref::boost_t_two_sided(t, 6), 1e-12);
  EXPECT_NE(custom.p_values(0), conventional.p_values(0));
}

TEST(FitLs, CollinearPredictorsAreRankDeficient) {
  Matrix x(6, 2);
  x.col(0) << 1, 2, 3, 4, 5, 6;
  x.col(1) = 3.0 * x.col(0);
  try {
    fit_ls(Vector::Random(6), x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficient);
  }
  // a constant predictor duplicates the intercept
  x.col(1).setConstant(4.0);
  EXPECT_THROW(fit_ls(Vector::Random(6), x), Error);
}

TEST(FitLs, TooFewRows) {
  try {
    fit_ls(Vector::Random(3), Matrix::Random(3, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewRows);
  }
}

// Replacing a predictor by c x + d or the response by c' y + d' leaves the
// slope t-statistics, hence p-values, unchanged.
TEST(FitLs, AffineInvarianceOfPValues) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index m = 12;
    Matrix x(m, 3);
    Vector y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) x(r, c) = g(rng);
      y(r) = 0.7 * x(r, 0) - 0.4 * x(r, 2) + g(rng);
    }
    const auto base = fit_ls(y, x);
    Matrix x2 = x;
    const Eigen::Index col = trial % 3;
    const double c = (trial % 2 ? -1.0 : 1.0) * scale(rng);
    x2.col(col) = c * x.col(col).array() + g(rng);
    const Vector y2 = (-scale(rng)) * y.array() + 3.0 * g(rng);
    const auto moved = fit_ls(y2, x2);
    for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(base.p_values(j), moved.p_values(j), 1e-10);
  }
}

TEST(Weights, HuberIsOneInsideCorner) {
  EXPECT_EQ(huber_weight(0.0, 1.345), 1.0);
  EXPECT_EQ(huber_weight(1.345, 1.345), 1.0);
  EXPECT_EQ(huber_weight(-1.2, 1.345), 1.0);
  EXPECT_NEAR(huber_weight(2.69, 1.345), 0.5, 1e-15);
}

TEST(Weights, TukeyVanishesOutsideC) {
  EXPECT_EQ(tukey_weight(0.0, 4.685), 1.0);
  EXPECT_EQ(tukey_weight(4.685, 4.685), 0.0);
  EXPECT_EQ(tukey_weight(-10.0, 4.685), 0.0);
  EXPECT_NEAR(tukey_weight(4.685 / 2, 4.685), 0.5625, 1e-15);
}

TEST(MadScale, KnownValue) {
  // median 3, |dev| = {2,1,0,1,2} -> MAD 1
  EXPECT_NEAR(mad_scale(vec({1, 2, 3, 4, 5})), 1.0 / 0.6745, 1e-15);
  EXPECT_NEAR(mad_scale(vec({1, 2, 3, 4})), 1.0 / 0.6745, 1e-15);
}

TEST(FitMEstimator, CleanDataMatchesLs) {
  Matrix x(10, 2);
  Vector y(10);
  for (int r = 0; r < 10; ++r) {
    x(r, 0) = r;
    x(r, 1) = (r * r) % 7;
    y(r) = 1.0 + 2.0 * x(r, 0) - 0.5 * x(r, 1);
  }
  const auto ls = fit_ls(y, x);
  for (auto kind : {MEstimator::Huber, MEstimator::Tukey}) {
    const double tuning = kind == MEstimator::Huber ? kDefaultHuberK : kDefaultTukeyC;
    const auto m = fit_m_estimator(y, x, kind, tuning);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(m.coefficients(c), ls.coefficients(c), 1e-6);
  }
}

// Residuals of equal magnitude orthogonal to the design: every Huber weight
// is exactly 1, so the M-estimate is the LS fit.
TEST(FitMEstimator, UnitWeightsReproduceLs) {
  const Matrix x = column({1, 2, 3, 4, 5, 6, 7, 8});
  const Vector signs = vec({1, -1, -1, 1, -1, 1, 1, -1});
  const Vector y = (0.5 + 1.5 * x.col(0).array()).matrix() + 0.3 * signs;
  const auto ls = fit_ls(y, x);
  const auto hub = fit_m_estimator(y, x, MEstimator::Huber, kDefaultHuberK);
  EXPECT_TRUE(hub.converged);
  for (int c = 0; c < 2; ++c) {
    EXPECT_NEAR(hub.coefficients(c), ls.coefficients(c), 1e-12);
    EXPECT_NEAR(hub.std_errors(c), ls.std_errors(c), 1e-12);
  }
  EXPECT_NEAR(hub.p_values(0), ls.p_values(0), 1e-12);
}

TEST(FitMEstimator, ResistsSingleOutlier) {
  Matrix x(15, 1);
  Vector y(15);
  for (int r = 0; r < 15; ++r) {
    x(r, 0) = r + 1;
    y(r) = 2.0 * (r + 1);
  }
  y(14) = 100.0;
  const double ls_err = std::fabs(fit_ls(y, x).coefficients(1) - 2.0);
  for (auto kind : {MEstimator::Huber, MEstimator::Tukey}) {
    const double tuning = kind == MEstimator::Huber ? kDefaultHuberK : kDefaultTukeyC;
    const auto m = fit_m_estimator(y, x, kind, tuning);
    EXPECT_LT(std::fabs(m.coefficients(1) - 2.0), ls_err);
  }
}

TEST(FitMEstimator, IterationCapIsNotAnError) {
  Matrix x(15, 1);
  Vector y(15);
  for (int r = 0; r < 15; ++r) {
    x(r, 0) = r + 1;
    y(r) = 2.0 * (r + 1) + 0.01 * ((r * 7) % 5);
  }
  y(3) = -40.0;
  const auto m = fit_m_estimator(y, x, MEstimator::Huber, kDefaultHuberK, 1e-14, 1);
  EXPECT_FALSE(m.converged);
  EXPECT_EQ(m.p_values.size(), 1);
  EXPECT_TRUE(std::isfinite(m.coefficients(1)));
}

TEST(FitMEstimator, RankDeficientDesign) {
  Matrix x(8, 2);
  x.col(0) << 1, 2, 3, 4, 5, 6, 7, 8;
  x.col(1) = -x.col(0);
  EXPECT_THROW(fit_m_estimator(Vector::Random(8), x, MEstimator::Tukey, kDefaultTukeyC), Error);
}
