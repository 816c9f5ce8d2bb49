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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "flip/error.hpp"
#include "flip/grid.hpp"
#include "flip/phase.hpp"
#include "flip/series.hpp"
#include "flip/spectra.hpp"

namespace flip {

/// Sample autocorrelations rho_0..rho_H with the 1/T ACVF convention.
inline std::vector<double> sample_acf(const TimeSeries& x, int max_lag) {
  x.require_valid();
  if (max_lag < 0) throw InvalidArgument("sample_acf: negative lag");
  if (x.size() <= static_cast<std::size_t>(max_lag))
    throw InvalidArgument("sample_acf: series too short for requested lag");
  const double m = x.mean();
  const std::size_t t_len = x.size();
  std::vector<double> acf(static_cast<std::size_t>(max_lag) + 1);
  double g0 = 0.0;
  for (double v : x.values) g0 += (v - m) * (v - m);
  g0 /= static_cast<double>(t_len);
  if (!(g0 > 0.0)) throw InvalidArgument("sample_acf: zero-variance series");
  for (int h = 0; h <= max_lag; ++h) {
    double g = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(h) < t_len; ++t)
      g += (x.values[t] - m) * (x.values[t + static_cast<std::size_t>(h)] - m);
    acf[static_cast<std::size_t>(h)] = g / static_cast<double>(t_len) / g0;
  }
  return acf;
}

/// LIP for a general linear filter given its frequency response on [0, pi]:
///
///   LIP = 1 - <Psi, f>^2 / ( <Psi conj(Psi), f> <f> )
///
/// Inner products use evenness of f and the real-coefficient symmetry
/// Psi(e^{i lambda}) = conj(Psi(e^{-i lambda})), so the full-circle
/// integrals reduce to [0, pi].  Cauchy-Schwarz keeps the value in [0, 1];
/// rounding is clamped at 1e-9.
inline double lip_general(const std::vector<std::complex<double>>& psi,
                          const SpectralDensity& f) {
  f.require_valid();
  if (psi.size() != f.grid.size())
    throw InvalidArgument("lip_general: response/grid length mismatch");
  const double total = f.total();
  if (!(total > 0.0))
    throw PerfectPrediction("lip_general: residual spectrum has no mass");

  std::vector<double> re(f.values.size()), sq(f.values.size());
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    re[j] = psi[j].real() * f.values[j];
    sq[j] = std::norm(psi[j]) * f.values[j];
  }
  const double num = trapezoid(f.grid, re);
  const double den = trapezoid(f.grid, sq);
  if (!(den > 0.0)) throw InvalidArgument("lip_general: <Psi conj(Psi), f> must be > 0");
  const double lip = 1.0 - num * num / (den * total);
  return std::clamp(lip, 0.0, 1.0);
}

/// All-pass specialization: LIP = 1 - ( int_0^pi cos(g) f / int_0^pi f )^2.
inline double lip_allpass(const PhaseFunction& g, const SpectralDensity& f) {
  f.require_valid();
  if (!g.grid.same_as(f.grid)) throw InvalidArgument("lip_allpass: grid mismatch");
  const double total = f.total();
  if (!(total > 0.0))
    throw PerfectPrediction("lip_allpass: residual spectrum has no mass");
  const double c = check_perfect_privacy(g, f);
  return std::min(std::max(1.0 - c * c, 0.0), 1.0);
}

/// D_path = T^-1 sum (x_t - xhat_t)^2 / gamma(0), gamma(0) the (1/T) sample
/// variance of x.
inline double d_path(const TimeSeries& x, const TimeSeries& xhat) {
  x.require_valid();
  xhat.require_valid();
  if (x.size() != xhat.size()) throw InvalidArgument("d_path: length mismatch");
  const double g0 = x.variance();
  if (!(g0 > 0.0)) throw InvalidArgument("d_path: zero-variance input");
  double s = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double d = x.values[t] - xhat.values[t];
    s += d * d;
  }
  return s / static_cast<double>(x.size()) / g0;
}

/// D_ACF = H^-1 sum_{h=0}^{H} (rho_h - rhohat_h)^2.  The lag-0 term is zero
/// by construction and the divisor is H, as printed in the source formula.
inline double d_acf(const TimeSeries& x, const TimeSeries& xhat, int max_lag = 24) {
  if (max_lag < 1) throw InvalidArgument("d_acf: H must be >= 1");
  if (x.size() != xhat.size()) throw InvalidArgument("d_acf: length mismatch");
  if (x.size() <= static_cast<std::size_t>(max_lag))
    throw InvalidArgument("d_acf: series too short for H");
  const auto a = sample_acf(x, max_lag);
  const auto b = sample_acf(xhat, max_lag);
  double s = 0.0;
  for (std::size_t h = 0; h < a.size(); ++h) s += (a[h] - b[h]) * (a[h] - b[h]);
  return s / static_cast<double>(max_lag);
}

/// Remark-1 attenuation of i.i.d. noise addition: every lag-h autocorrelation
/// of x + noise shrinks below A rho_x(h) with A = SNR/(1+SNR).
inline double noise_baseline_attenuation(double signal_variance, double noise_variance) {
  if (!(signal_variance > 0.0) || !(noise_variance > 0.0))
    throw InvalidArgument("noise_baseline_attenuation: variances must be > 0");
  const double snr = signal_variance / noise_variance;
  return snr / (1.0 + snr);
}

}  // namespace flip
