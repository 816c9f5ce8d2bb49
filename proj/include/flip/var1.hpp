// Copyright 2026 The flip authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

#include "flip/error.hpp"
#include "flip/rng.hpp"
#include "flip/series.hpp"
#include "flip/spectra.hpp"

namespace flip {

/// Bivariate VAR(1) parameterized by the cross-correlation rho and the
/// innovation variance sigma2, with stationary variance v = sigma2/(1-rho) + 1
/// so that Gamma0 - Sigma is positive definite for rho >= 0 (and for rho < 0
/// whenever sigma2 < (1 - rho^2)/(2|rho|)).
struct Var1Spec {
  double rho = 0.0;
  double sigma2 = 1.0;
  double v = 0.0;
  Eigen::Matrix2d gamma0 = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d phi = Eigen::Matrix2d::Zero();

  VarModel model() const {
    VarModel m;
    m.order = 1;
    m.phi = {phi};
    m.sigma = sigma2 * Eigen::Matrix2d::Identity();
    return m;
  }
};

namespace detail {

/// Symmetric PSD square root via eigendecomposition.
inline Eigen::Matrix2d sym_sqrt(const Eigen::Matrix2d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  if (es.info() != Eigen::Success) throw NumericError("sym_sqrt: eigensolver failed");
  Eigen::Vector2d ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-14 * std::abs(ev.maxCoeff()))
    throw NumericError("sym_sqrt: matrix not PSD");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Solves the stationarity (Riccati) equation Gamma0 = Phi Gamma0 Phi' + Sigma
/// for the coefficient matrix: Phi = (Gamma0 - Sigma)^{1/2} Gamma0^{-1/2},
/// with symmetric PSD square roots.
inline Var1Spec riccati_var1(double rho, double sigma2) {
  if (!(rho > -1.0 && rho < 1.0))
    throw InvalidArgument("riccati_var1: rho must lie in (-1, 1)");
  if (!(sigma2 > 0.0)) throw InvalidArgument("riccati_var1: sigma2 must be > 0");

  Var1Spec spec;
  spec.rho = rho;
  spec.sigma2 = sigma2;
  spec.v = sigma2 / (1.0 - rho) + 1.0;
  spec.gamma0 << spec.v, spec.v * rho, spec.v * rho, spec.v;

  const Eigen::Matrix2d shifted =
      spec.gamma0 - sigma2 * Eigen::Matrix2d::Identity();
  // Eigenvalues of Gamma0 - Sigma are v(1 +- rho) - sigma2.
  const double min_eig = spec.v * (1.0 - std::abs(rho)) - sigma2;
  if (!(min_eig > 0.0))
    throw NumericError(
        "riccati_var1: Gamma0 - Sigma not positive definite for this (rho, sigma2)");

  const Eigen::Matrix2d root = detail::sym_sqrt(shifted);
  const Eigen::Matrix2d g_root = detail::sym_sqrt(spec.gamma0);
  spec.phi = root * g_root.inverse();

  const Eigen::Matrix2d residual =
      spec.phi * spec.gamma0 * spec.phi.transpose() +
      sigma2 * Eigen::Matrix2d::Identity() - spec.gamma0;
  if (residual.cwiseAbs().maxCoeff() > 1e-10)
    throw NumericError("riccati_var1: Riccati residual above 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(spec.phi);
  if (es.eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
    throw NumericError("riccati_var1: nonstationary coefficient matrix");
  return spec;
}

/// Gaussian VAR(1) path of length T with the stationary initial draw
/// X_0 ~ N(0, Gamma0), so no burn-in is needed.
inline std::pair<TimeSeries, TimeSeries> simulate_var1(const Var1Spec& spec,
                                                       std::size_t t_len, Rng& rng) {
  if (t_len < 1) throw InvalidArgument("simulate_var1: T must be >= 1");
  const Eigen::Matrix2d g_root = detail::sym_sqrt(spec.gamma0);
  const double noise_sd = std::sqrt(spec.sigma2);

  Eigen::Vector2d state = g_root * Eigen::Vector2d(rng.normal(), rng.normal());
  TimeSeries x, z;
  x.label = "x";
  z.label = "z";
  x.values.reserve(t_len);
  z.values.reserve(t_len);
  for (std::size_t t = 0; t < t_len; ++t) {
    state = spec.phi * state +
            noise_sd * Eigen::Vector2d(rng.normal(), rng.normal());
    x.values.push_back(state(0));
    z.values.push_back(state(1));
  }
  return {std::move(x), std::move(z)};
}

}  // namespace flip
