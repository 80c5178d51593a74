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
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "g1dbn/core.hpp"

namespace g1dbn {

using Rng = std::mt19937_64;

/// Mixes a base seed with a replicate index and a stream id so that every
/// replicate (and every purpose within it) owns an independent generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate,
                                 std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(base),
                    static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

struct RandomModelOptions {
  bool require_stable = false;
  /// Fraction of off-diagonal error covariances made nonzero.
  double offdiag_sigma_density = 0.0;
  int max_attempts = 1000;
  /// Nonzero coefficients and intercepts: uniform magnitude in
  /// [coef_low, coef_high] with a random sign.
  double coef_low = 0.05;
  double coef_high = 0.95;
  /// Error standard deviations sigma_i ~ U[sigma_low, sigma_high].
  double sigma_low = 0.03;
  double sigma_high = 0.08;
};

namespace detail {

inline double signed_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution negative(0.5);
  const double v = mag(rng);
  return negative(rng) ? -v : v;
}

// Eigenvalue clipping; the result is the closest (Frobenius) symmetric
// matrix whose spectrum is bounded below by `floor`.
inline Matrix nearest_spd(const Matrix& s, double floor) {
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  Vector values = eig.eigenvalues().cwiseMax(floor);
  Matrix out = eig.eigenvectors() * values.asDiagonal() *
               eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace detail

/// Random sparse AR(1) model: each a_ij is nonzero with probability
/// `density`. With `require_stable`, A is redrawn until its spectral radius
/// is below 1.
inline AR1Model random_ar1_model(Eigen::Index p, double density,
                                 std::uint64_t seed,
                                 const RandomModelOptions& opts = {}) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "p must be >= 1", p);
  if (!(density >= 0.0 && density <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "density must lie in [0, 1]");
  if (!(opts.offdiag_sigma_density >= 0.0 && opts.offdiag_sigma_density <= 1.0))
    throw Error(ErrorKind::InvalidArgument,
                "off-diagonal sigma density must lie in [0, 1]");
  if (!(opts.coef_low >= 0.0 && opts.coef_low <= opts.coef_high) ||
      !(opts.sigma_low > 0.0 && opts.sigma_low <= opts.sigma_high))
    throw Error(ErrorKind::InvalidArgument, "invalid coefficient ranges");

  Rng rng = make_rng(seed);
  std::bernoulli_distribution nonzero(density);
  std::bernoulli_distribution offdiag(opts.offdiag_sigma_density);
  std::uniform_real_distribution<double> sigma_draw(opts.sigma_low,
                                                    opts.sigma_high);

  Vector b(p);
  for (Eigen::Index i = 0; i < p; ++i)
    b(i) = detail::signed_uniform(rng, opts.coef_low, opts.coef_high);
  Vector sd(p);
  for (Eigen::Index i = 0; i < p; ++i) sd(i) = sigma_draw(rng);
  Matrix sigma = sd.cwiseAbs2().asDiagonal();
  bool has_offdiag = false;
  if (opts.offdiag_sigma_density > 0.0) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i + 1; j < p; ++j) {
        if (!offdiag(rng)) continue;
        const double rho = detail::signed_uniform(rng, 0.05, 0.95);
        sigma(i, j) = sigma(j, i) = rho * sd(i) * sd(j);
        has_offdiag = true;
      }
    }
  }
  if (has_offdiag && Eigen::LLT<Matrix>(sigma).info() != Eigen::Success) {
    sigma = detail::nearest_spd(sigma, 1e-3 * sd.cwiseAbs2().minCoeff());
  }

  auto draw_a = [&] {
    Matrix a = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j)
        if (nonzero(rng))
          a(i, j) = detail::signed_uniform(rng, opts.coef_low, opts.coef_high);
    return a;
  };

  Matrix a = draw_a();
  if (opts.require_stable) {
    int attempts = 1;
    while (spectral_radius(a) >= 1.0) {
      if (attempts >= opts.max_attempts) {
        throw Error(ErrorKind::StabilityNotReached,
                    "no stable A after " + std::to_string(attempts) +
                        " attempts",
                    attempts);
      }
      a = draw_a();
      ++attempts;
    }
  }
  return AR1Model(std::move(a), std::move(b), std::move(sigma));
}

struct NoiseSpec {
  enum class Kind { Gaussian, Uniform };
  Kind kind = Kind::Gaussian;
  /// Uniform support.
  double low = -2.0;
  double high = 2.0;
  /// Uniform only. When false the draws are used at their own scale and
  /// sigma contributes only its correlation structure; when true they are
  /// standardized and coloured by sigma like the Gaussian case.
  bool scale_to_sigma = false;

  static NoiseSpec gaussian() { return {}; }
  static NoiseSpec uniform(double lo = -2.0, double hi = 2.0) {
    return {Kind::Uniform, lo, hi, false};
  }
};

/// Raw AR(1) path as an n x p matrix (any p >= 1). X_1 = B + eps_1; with
/// `burn_in` > 0 that many further steps are taken before recording.
inline Matrix simulate_values(const AR1Model& model, Eigen::Index n,
                              std::uint64_t seed,
                              const NoiseSpec& noise = NoiseSpec::gaussian(),
                              Eigen::Index burn_in = 0) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1", n);
  if (burn_in < 0) throw Error(ErrorKind::InvalidArgument, "negative burn-in");
  if (noise.kind == NoiseSpec::Kind::Uniform && !(noise.low < noise.high))
    throw Error(ErrorKind::InvalidArgument, "uniform noise needs low < high");

  const auto p = model.p();
  const Matrix& sigma = model.sigma();
  Matrix colour;
  const bool unscaled_uniform =
      noise.kind == NoiseSpec::Kind::Uniform && !noise.scale_to_sigma;
  if (unscaled_uniform) {
    const Vector inv_sd = sigma.diagonal().cwiseSqrt().cwiseInverse();
    const Matrix corr = inv_sd.asDiagonal() * sigma * inv_sd.asDiagonal();
    colour = Eigen::LLT<Matrix>(corr).matrixL();
  } else {
    colour = Eigen::LLT<Matrix>(sigma).matrixL();
  }

  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(noise.low, noise.high);
  const double u_mean = 0.5 * (noise.low + noise.high);
  const double u_sd = (noise.high - noise.low) / std::sqrt(12.0);
  Vector z(p);
  auto draw = [&]() -> Vector {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (noise.kind == NoiseSpec::Kind::Gaussian) {
        z(i) = gauss(rng);
      } else if (unscaled_uniform) {
        z(i) = unif(rng);
      } else {
        z(i) = (unif(rng) - u_mean) / u_sd;
      }
    }
    return colour.triangularView<Eigen::Lower>() * z;
  };

  Matrix out(n, p);
  Vector x = model.b() + draw();
  for (Eigen::Index s = 0; s < burn_in; ++s)
    x = model.a() * x + model.b() + draw();
  out.row(0) = x.transpose();
  for (Eigen::Index t = 1; t < n; ++t) {
    x = model.a() * x + model.b() + draw();
    out.row(t) = x.transpose();
  }
  return out;
}

inline TimeSeries simulate_series(const AR1Model& model, Eigen::Index n,
                                  std::uint64_t seed,
                                  const NoiseSpec& noise = NoiseSpec::gaussian(),
                                  Eigen::Index burn_in = 0) {
  if (n < 2) throw Error(ErrorKind::TooFewTimePoints, "n must be >= 2", n);
  return TimeSeries(simulate_values(model, n, seed, noise, burn_in));
}

/// Second-order variant X_t = A1 X_{t-1} + A2 X_{t-2} + B + eps_t with
/// Gaussian errors, used to probe a misspecified Markov order. Both X_1 and
/// X_2 start at B + eps.
inline Matrix simulate_ar2_values(const Matrix& a1, const Matrix& a2,
                                  const AR1Model& base, Eigen::Index n,
                                  std::uint64_t seed) {
  const auto p = base.p();
  if (a1.rows() != p || a1.cols() != p || a2.rows() != p || a2.cols() != p)
    throw Error(ErrorKind::InvalidArgument, "AR(2) coefficient shape mismatch");
  if (n < 2) throw Error(ErrorKind::TooFewTimePoints, "n must be >= 2", n);
  const Matrix colour = Eigen::LLT<Matrix>(base.sigma()).matrixL();
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector z(p);
  auto draw = [&]() -> Vector {
    for (Eigen::Index i = 0; i < p; ++i) z(i) = gauss(rng);
    return colour.triangularView<Eigen::Lower>() * z;
  };
  Matrix out(n, p);
  out.row(0) = (base.b() + draw()).transpose();
  out.row(1) = (base.b() + draw()).transpose();
  for (Eigen::Index t = 2; t < n; ++t) {
    out.row(t) = (a1 * out.row(t - 1).transpose() +
                  a2 * out.row(t - 2).transpose() + base.b() + draw())
                     .transpose();
  }
  return out;
}

}  // namespace g1dbn
