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
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "flip/error.hpp"
#include "flip/grid.hpp"
#include "flip/series.hpp"

namespace flip {

// Spectral convention: gamma(h) = integral_{-pi}^{pi} e^{i h lambda} f(lambda) dlambda,
// i.e. the density carries the (2 pi)^-1 factor.  White noise with variance
// s^2 has f = s^2/(2 pi).

/// Non-negative spectral density sampled on a FrequencyGrid.
struct SpectralDensity {
  FrequencyGrid grid;
  std::vector<double> values;

  /// integral of f over [0, pi] by the grid trapezoid.
  double total() const { return trapezoid(grid, values); }

  void require_valid() const {
    if (values.size() != grid.size())
      throw InvalidArgument("SpectralDensity: value/grid length mismatch");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidArgument("SpectralDensity: values must be finite and >= 0");
  }
};

/// 2x2 Hermitian cross-spectral matrix [[f_X, f_XZ], [conj(f_XZ), f_Z]] per
/// grid point.  Only the three distinct entries are stored.
struct SpectralMatrix {
  FrequencyGrid grid;
  std::vector<double> fx;
  std::vector<double> fz;
  std::vector<std::complex<double>> fxz;
  int psd_clip_count = 0;  // diagnostic: grid points repaired to PSD

  SpectralDensity x_density() const { return SpectralDensity{grid, fx}; }
  SpectralDensity z_density() const { return SpectralDensity{grid, fz}; }

  void require_valid() const {
    const std::size_t n = grid.size();
    if (fx.size() != n || fz.size() != n || fxz.size() != n)
      throw InvalidArgument("SpectralMatrix: entry/grid length mismatch");
    for (std::size_t j = 0; j < n; ++j) {
      if (fx[j] < 0.0 || fz[j] < 0.0)
        throw InvalidArgument("SpectralMatrix: negative diagonal");
      const double det = fx[j] * fz[j] - std::norm(fxz[j]);
      const double scale = std::max(1e-300, fx[j] * fz[j]);
      if (det < -1e-10 * scale)
        throw InvalidArgument("SpectralMatrix: not PSD at a grid point");
    }
  }
};

/// CDF of a normalized spectral density: F(lambda) = int_0^lambda f / int_0^pi f.
struct SpectralCdf {
  FrequencyGrid grid;
  std::vector<double> values;  // F(lambda_j), nondecreasing, F(0)=0, F(pi)=1
};

/// Bivariate VAR(p) with coefficient matrices Phi_1..Phi_p and innovation
/// covariance Sigma.
struct VarModel {
  int order = 1;
  std::vector<Eigen::Matrix2d> phi;
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();

  /// Largest eigenvalue modulus of the companion matrix.
  double companion_spectral_radius() const {
    const int p = order;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * p, 2 * p);
    for (int k = 0; k < p; ++k) c.block<2, 2>(0, 2 * k) = phi[static_cast<std::size_t>(k)];
    if (p > 1)
      c.block(2, 0, 2 * (p - 1), 2 * (p - 1)) =
          Eigen::MatrixXd::Identity(2 * (p - 1), 2 * (p - 1));
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, /*computeEigenvectors=*/false);
    double r = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      r = std::max(r, std::abs(es.eigenvalues()(i)));
    return r;
  }
};

/// f(lambda) = (2 pi)^-1 A(z)^-1 Sigma A(z)^-H with A(z) = I - sum Phi_k z^k,
/// z = e^{-i lambda}.
inline SpectralMatrix var_spectral_matrix(const VarModel& model,
                                          const FrequencyGrid& grid) {
  if (model.order < 1 || model.phi.size() != static_cast<std::size_t>(model.order))
    throw InvalidArgument("var_spectral_matrix: malformed model");
  if (model.companion_spectral_radius() >= 1.0 - 1e-6)
    throw NumericError("var_spectral_matrix: nonstationary model (spectral radius >= 1 - 1e-6)");

  using C = std::complex<double>;
  SpectralMatrix out;
  out.grid = grid;
  const std::size_t n = grid.size();
  out.fx.resize(n);
  out.fz.resize(n);
  out.fxz.resize(n);
  const double norm = 1.0 / (2.0 * std::numbers::pi);
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = grid.points[j];
    Eigen::Matrix2cd a = Eigen::Matrix2cd::Identity();
    for (int k = 1; k <= model.order; ++k) {
      const C zk = std::polar(1.0, -lam * k);
      a -= model.phi[static_cast<std::size_t>(k - 1)].cast<C>() * zk;
    }
    const Eigen::Matrix2cd ainv = a.inverse();
    const Eigen::Matrix2cd f = norm * ainv * model.sigma.cast<C>() * ainv.adjoint();
    out.fx[j] = f(0, 0).real();
    out.fz[j] = f(1, 1).real();
    out.fxz[j] = f(0, 1);
  }
  return out;
}

/// Per-equation least-squares VAR(p) fit on the demeaned pair; Sigma from
/// the residual covariance.  This is the "similar procedure" standing in
/// for Gaussian maximum likelihood.
inline VarModel fit_var(const TimeSeries& x, const TimeSeries& z, int p) {
  x.require_valid();
  z.require_valid();
  if (p < 1) throw InvalidArgument("fit_var: order must be >= 1");
  if (x.size() != z.size()) throw InvalidArgument("fit_var: length mismatch");
  const std::size_t t_len = x.size();
  if (t_len < static_cast<std::size_t>(10 * p))
    throw InvalidArgument("fit_var: insufficient data (need T >= 10 p)");

  const double mx = x.mean();
  const double mz = z.mean();
  const auto rows = static_cast<Eigen::Index>(t_len - static_cast<std::size_t>(p));
  Eigen::MatrixXd regressors(rows, 2 * p);
  Eigen::MatrixXd response(rows, 2);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = static_cast<std::size_t>(r) + static_cast<std::size_t>(p);
    response(r, 0) = x.values[t] - mx;
    response(r, 1) = z.values[t] - mz;
    for (int k = 1; k <= p; ++k) {
      regressors(r, 2 * (k - 1)) = x.values[t - static_cast<std::size_t>(k)] - mx;
      regressors(r, 2 * (k - 1) + 1) = z.values[t - static_cast<std::size_t>(k)] - mz;
    }
  }
  const Eigen::MatrixXd xtx = regressors.transpose() * regressors;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("fit_var: singular regressor matrix");
  const Eigen::MatrixXd b = ldlt.solve(regressors.transpose() * response);  // (2p) x 2

  VarModel model;
  model.order = p;
  model.phi.resize(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k)
    model.phi[static_cast<std::size_t>(k)] = b.block<2, 2>(2 * k, 0).transpose();
  const Eigen::MatrixXd resid = response - regressors * b;
  model.sigma = (resid.transpose() * resid) / static_cast<double>(rows);

  if (model.companion_spectral_radius() >= 1.0 - 1e-6)
    throw NumericError("fit_var: nonstationary estimate");
  return model;
}

namespace detail {

/// Flat-top lag-window: 1 on |u| <= 1/2, linear to 0 at |u| = 1.
inline double flat_top_weight(double u) {
  const double a = std::abs(u);
  if (a <= 0.5) return 1.0;
  if (a <= 1.0) return 2.0 * (1.0 - a);
  return 0.0;
}

}  // namespace detail

struct FlatTopDiagnostics {
  int bandwidth = 0;      // l
  double threshold = 0.0; // C actually used
  int psd_clip_count = 0;
};

/// Nonparametric estimate of the 2x2 spectral matrix from the flat-top
/// tapered sample autocovariances Gamma_k = T^-1 sum_{t<=T-k} W_t W_{t+k}'.
///
/// Bandwidth rule: l = max(1, 2 q) where q is the smallest lag such that
/// every entry of the lag correlation matrix stays below C for the next
/// five lags.  Default C = max(1/T, 2 sqrt(log10(T)/T)).  Estimates are
/// eigenvalue-clipped to PSD pointwise; the clip count is reported.
inline SpectralMatrix flat_top_spectral_matrix(
    const TimeSeries& x, const TimeSeries& z, const FrequencyGrid& grid,
    std::optional<double> threshold = std::nullopt,
    FlatTopDiagnostics* diagnostics = nullptr) {
  x.require_valid();
  z.require_valid();
  if (x.size() != z.size())
    throw InvalidArgument("flat_top_spectral_matrix: length mismatch");
  const std::size_t t_len = x.size();
  if (t_len < 8) throw InvalidArgument("flat_top_spectral_matrix: need T >= 8");

  const double t_d = static_cast<double>(t_len);
  const double c_thr =
      threshold.value_or(std::max(1.0 / t_d, 2.0 * std::sqrt(std::log10(t_d) / t_d)));

  const std::size_t max_lag = t_len - 1;
  std::vector<Eigen::Matrix2d> gamma(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (std::size_t t = 0; t + k < t_len; ++t) {
      const Eigen::Vector2d wt(x.values[t], z.values[t]);
      const Eigen::Vector2d wtk(x.values[t + k], z.values[t + k]);
      g += wt * wtk.transpose();
    }
    gamma[k] = g / t_d;
  }

  const double sx = std::sqrt(std::max(gamma[0](0, 0), 1e-300));
  const double sz = std::sqrt(std::max(gamma[0](1, 1), 1e-300));
  auto corr_max = [&](std::size_t k) {
    return std::max(
        std::max(std::abs(gamma[k](0, 0)) / (sx * sx), std::abs(gamma[k](1, 1)) / (sz * sz)),
        std::max(std::abs(gamma[k](0, 1)), std::abs(gamma[k](1, 0))) / (sx * sz));
  };
  std::size_t q = max_lag >= 5 ? max_lag - 5 : 0;
  for (std::size_t cand = 0; cand + 5 <= max_lag; ++cand) {
    bool below = true;
    for (std::size_t k = 1; k <= 5; ++k)
      if (corr_max(cand + k) >= c_thr) {
        below = false;
        break;
      }
    if (below) {
      q = cand;
      break;
    }
  }
  const std::size_t bandwidth = std::min(std::max<std::size_t>(2 * q, 1), max_lag);

  SpectralMatrix out;
  out.grid = grid;
  const std::size_t n = grid.size();
  out.fx.resize(n);
  out.fz.resize(n);
  out.fxz.resize(n);
  const double norm = 1.0 / (2.0 * std::numbers::pi);
  int clipped = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lam = grid.points[j];
    Eigen::Matrix2cd f = gamma[0].cast<std::complex<double>>();
    for (std::size_t k = 1; k <= bandwidth; ++k) {
      const double w =
          detail::flat_top_weight(static_cast<double>(k) / static_cast<double>(bandwidth));
      if (w == 0.0) continue;
      const std::complex<double> zk = std::polar(1.0, -lam * static_cast<double>(k));
      f += w * (gamma[k].cast<std::complex<double>>() * zk +
                gamma[k].transpose().cast<std::complex<double>>() * std::conj(zk));
    }
    f *= norm;
    // 2x2 Hermitian eigen-clip: lift negative eigenvalues to zero.
    double a = f(0, 0).real();
    double d = f(1, 1).real();
    std::complex<double> b = 0.5 * (f(0, 1) + std::conj(f(1, 0)));
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    const double lo = mean - disc;
    if (lo < 0.0) {
      ++clipped;
      const double hi = mean + disc;
      if (hi <= 0.0) {
        a = d = 0.0;
        b = 0.0;
      } else {
        // Projection onto the PSD cone: keep the nonnegative eigenpair.
        Eigen::Vector2cd v;
        if (std::abs(b) > 0.0)
          v << b / std::abs(b) * (hi - d), std::abs(b);
        else
          v << (a >= d ? 1.0 : 0.0), (a >= d ? 0.0 : 1.0);
        v.normalize();
        const Eigen::Matrix2cd proj = hi * v * v.adjoint();
        a = proj(0, 0).real();
        d = proj(1, 1).real();
        b = proj(0, 1);
      }
    }
    out.fx[j] = std::max(a, 0.0);
    out.fz[j] = std::max(d, 0.0);
    out.fxz[j] = b;
  }
  out.psd_clip_count = clipped;
  if (diagnostics) {
    diagnostics->bandwidth = static_cast<int>(bandwidth);
    diagnostics->threshold = c_thr;
    diagnostics->psd_clip_count = clipped;
  }
  return out;
}

/// Residual spectrum of the best linear predictor of X from the whole Z
/// series: f_{X|Z} = f_X - |f_XZ|^2 / f_Z, clipped below at zero.
inline SpectralDensity conditional_spectrum(const SpectralMatrix& f) {
  const std::size_t n = f.grid.size();
  if (f.fx.size() != n || f.fz.size() != n || f.fxz.size() != n)
    throw InvalidArgument("conditional_spectrum: malformed spectral matrix");

  const double fz_total = trapezoid(f.grid, f.fz);
  const double floor = 1e-10 * fz_total / std::numbers::pi;
  SpectralDensity out;
  out.grid = f.grid;
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(f.fz[j] > floor))
      throw NumericError(
          "conditional_spectrum: f_Z below the denominator floor at lambda = " +
          std::to_string(f.grid.points[j]));
    out.values[j] = std::max(0.0, f.fx[j] - std::norm(f.fxz[j]) / f.fz[j]);
  }
  const double fx_total = trapezoid(f.grid, f.fx);
  if (trapezoid(f.grid, out.values) <= 1e-12 * fx_total)
    throw PerfectPrediction(
        "conditional_spectrum: residual spectrum has no mass; the auxiliary series "
        "already predicts the sensitive series perfectly");
  return out;
}

/// F(lambda_j) = (cumulative trapezoid of f up to lambda_j) / total mass.
inline SpectralCdf spectral_cdf(const SpectralDensity& f) {
  f.require_valid();
  const double total = f.total();
  if (!(total > 0.0))
    throw InvalidArgument("spectral_cdf: zero total mass");
  SpectralCdf out;
  out.grid = f.grid;
  out.values = cumulative_trapezoid(f.grid, f.values);
  for (double& v : out.values) v /= total;
  return out;
}

/// gamma(h) = 2 int_0^pi cos(h lambda) f(lambda) dlambda for h = 0..max_lag.
inline std::vector<double> acvf_from_spectrum(const SpectralDensity& f, int max_lag) {
  f.require_valid();
  if (max_lag < 0) throw InvalidArgument("acvf_from_spectrum: negative lag");
  std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1);
  std::vector<double> integrand(f.values.size());
  for (int h = 0; h <= max_lag; ++h) {
    for (std::size_t j = 0; j < f.values.size(); ++j)
      integrand[j] = std::cos(static_cast<double>(h) * f.grid.points[j]) * f.values[j];
    gamma[static_cast<std::size_t>(h)] = 2.0 * trapezoid(f.grid, integrand);
  }
  return gamma;
}

}  // namespace flip
