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
#include <numbers>
#include <utility>
#include <vector>

#include "flip/error.hpp"
#include "flip/grid.hpp"
#include "flip/phase.hpp"
#include "flip/series.hpp"

namespace flip {

/// Cepstral expansion of a phase: g(lambda) = 2 sum_{k>=1} phi_k sin(k lambda).
/// Only k >= 1 is stored; the full sequence is odd (phi_{-k} = -phi_k).
struct CepstralCoeffs {
  std::vector<double> phi;       // phi[k-1] holds phi_k
  double truncation_bound = 0.0; // sup-norm estimate for the discarded tail

  int order() const noexcept { return static_cast<int>(phi.size()); }
};

/// phi_k = (1/pi) int_0^pi g(lambda) sin(k lambda) dlambda, k = 1..K, by the
/// grid trapezoid.  K is capped at N/4 to stay clear of quadrature aliasing.
///
/// The tail bound is the r = 1 smoothness estimate <g'> / (2 pi K), with
/// <g'> taken as the mean magnitude of a central-difference derivative.
inline CepstralCoeffs cepstral_coeffs(const PhaseFunction& g, int k_max) {
  if (k_max < 1) throw InvalidArgument("cepstral_coeffs: K must be >= 1");
  if (k_max > g.grid.n / 4)
    throw InvalidArgument("cepstral_coeffs: K exceeds N/4 (aliasing guard)");

  CepstralCoeffs cep;
  cep.phi.resize(static_cast<std::size_t>(k_max));
  std::vector<double> integrand(g.values.size());
  for (int k = 1; k <= k_max; ++k) {
    for (std::size_t j = 0; j < g.values.size(); ++j)
      integrand[j] = g.values[j] * std::sin(static_cast<double>(k) * g.grid.points[j]);
    cep.phi[static_cast<std::size_t>(k - 1)] =
        trapezoid(g.grid, integrand) / std::numbers::pi;
  }

  const double h = g.grid.step();
  double deriv_sum = 0.0;
  for (std::size_t j = 1; j + 1 < g.values.size(); ++j)
    deriv_sum += std::abs(g.values[j + 1] - g.values[j - 1]) / (2.0 * h);
  const double mean_deriv =
      g.values.size() > 2 ? deriv_sum / static_cast<double>(g.values.size() - 2) : 0.0;
  cep.truncation_bound = mean_deriv / (2.0 * std::numbers::pi * k_max);
  return cep;
}

/// One-sided expansions psi+/psi- of exp(+-phi+(z)) via the cepstral
/// recursions (j+1) psi_{j+1} = +- sum_{k<=j} (k+1) phi_{k+1} psi_{j-k},
/// psi_0 = 1.  Magnitudes above 1e12 abort: the phase is pathological.
inline std::pair<std::vector<double>, std::vector<double>> cepstral_recursions(
    const CepstralCoeffs& cep, int m) {
  if (m < 1) throw InvalidArgument("cepstral_recursions: M must be >= 1");
  const auto k_max = static_cast<std::size_t>(cep.order());
  std::vector<double> plus(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> minus(static_cast<std::size_t>(m) + 1, 0.0);
  plus[0] = minus[0] = 1.0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) {
    double acc_p = 0.0, acc_m = 0.0;
    const std::size_t kk = std::min(j + 1, k_max);
    for (std::size_t k = 0; k < kk; ++k) {
      const double w = static_cast<double>(k + 1) * cep.phi[k];
      acc_p += w * plus[j - k];
      acc_m -= w * minus[j - k];
    }
    plus[j + 1] = acc_p / static_cast<double>(j + 1);
    minus[j + 1] = acc_m / static_cast<double>(j + 1);
    if (std::abs(plus[j + 1]) > 1e12 || std::abs(minus[j + 1]) > 1e12)
      throw NumericError("cepstral_recursions: coefficient overflow; pathological phase");
  }
  return {std::move(plus), std::move(minus)};
}

/// Finite all-pass filter: two-sided impulse response from the Wiener-Hopf
/// factors, plus the cepstral data it was built from.  `delay` records a
/// pure-shift factor z^delay split off the cepstral part, so the realized
/// response is z^delay exp(phi(z) - phi(z^-1)).
struct AllPassFilter {
  CepstralCoeffs cepstral;
  std::vector<double> psi_plus;   // length M+1, psi_plus[0] = 1
  std::vector<double> psi_minus;  // length M+1, psi_minus[0] = 1
  std::vector<double> impulse;    // psi_j for j = -M..M at index j+M
  int m = 0;
  int delay = 0;
  double unitarity_defect = 0.0;  // sup_grid | |Psi_M| - 1 |

  double psi(int j) const { return impulse[static_cast<std::size_t>(j + m)]; }
};

/// Response of the truncated filter, Psi_M(e^{-i lambda}) = sum_j psi_j e^{-i j lambda},
/// on an arbitrary grid.
inline std::vector<std::complex<double>> impulse_response_values(
    const AllPassFilter& filter, const FrequencyGrid& grid) {
  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double lam = grid.points[p];
    std::complex<double> acc = 0.0;
    for (int j = -filter.m; j <= filter.m; ++j)
      acc += filter.psi(j) * std::polar(1.0, -lam * j);
    out[p] = acc;
  }
  return out;
}

/// Exact-phase response exp(-i g_K(lambda)) with g_K = 2 sum phi_k sin(k lambda).
/// Unit modulus for every K by construction.
inline std::vector<std::complex<double>> cepstral_response(
    const CepstralCoeffs& cep, const FrequencyGrid& grid) {
  std::vector<std::complex<double>> out(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double g = 0.0;
    for (int k = 1; k <= cep.order(); ++k)
      g += 2.0 * cep.phi[static_cast<std::size_t>(k - 1)] *
           std::sin(static_cast<double>(k) * grid.points[p]);
    out[p] = std::polar(1.0, -g);
  }
  return out;
}

/// Collects psi_j = sum_k psi+_{j+k} psi-_k for -M <= j <= M from the
/// product psi+(z) psi-(z^-1), and measures the unitarity defect of the
/// truncated response on a reference grid.
///
/// The k-sum runs over every term the given factor sequences can supply.
/// Factors of length exactly M+1 give the minimal truncated sums; longer
/// factors tighten them.  The slow factor is exp(-phi+(z)): its leading
/// coefficients shrink like those of 1/(1+z) when the phase carries the
/// full pi endpoint, and only decay once k well exceeds the cepstral
/// order, so build_allpass extends the recursions until both tails die.
inline AllPassFilter assemble_filter(std::vector<double> psi_plus,
                                     std::vector<double> psi_minus, int m,
                                     CepstralCoeffs cepstral = {}) {
  if (psi_plus.size() < static_cast<std::size_t>(m) + 1 ||
      psi_minus.size() < static_cast<std::size_t>(m) + 1)
    throw InvalidArgument("assemble_filter: factor sequences shorter than M+1");
  AllPassFilter filter;
  filter.m = m;
  filter.cepstral = std::move(cepstral);
  filter.psi_plus = std::move(psi_plus);
  filter.psi_minus = std::move(psi_minus);
  filter.impulse.assign(2 * static_cast<std::size_t>(m) + 1, 0.0);
  const auto len_plus = static_cast<long>(filter.psi_plus.size());
  const auto len_minus = static_cast<long>(filter.psi_minus.size());
  for (int j = -m; j <= m; ++j) {
    double acc = 0.0;
    const long k_end = std::min(len_minus - 1, len_plus - 1 - j);
    for (long k = std::max(0L, static_cast<long>(-j)); k <= k_end; ++k)
      acc += filter.psi_plus[static_cast<std::size_t>(j + k)] *
             filter.psi_minus[static_cast<std::size_t>(k)];
    filter.impulse[static_cast<std::size_t>(j + m)] = acc;
  }

  const auto ref = FrequencyGrid::make(2048);
  double defect = 0.0;
  for (const auto& v : impulse_response_values(filter, ref))
    defect = std::max(defect, std::abs(std::abs(v) - 1.0));
  filter.unitarity_defect = defect;
  filter.psi_plus.resize(static_cast<std::size_t>(m) + 1);
  filter.psi_minus.resize(static_cast<std::size_t>(m) + 1);
  return filter;
}

/// Full pipeline from cepstral coefficients to the finite filter.  The
/// recursions are run past M until both one-sided tails fall below 1e-14
/// of their peaks (capped at 16384 terms), so the collected psi_j are the
/// converged Laurent coefficients of exp(phi_K(z) - phi_K(z^-1)).
inline AllPassFilter build_allpass(const CepstralCoeffs& cep, int m) {
  int length = std::max(2 * m, 8 * cep.order());
  for (;; length *= 2) {
    auto [plus, minus] = cepstral_recursions(cep, length);
    double peak = 0.0;
    for (std::size_t k = 0; k < plus.size(); ++k)
      peak = std::max({peak, std::abs(plus[k]), std::abs(minus[k])});
    const std::size_t tail = plus.size() - std::min<std::size_t>(plus.size(), 8);
    double tail_max = 0.0;
    for (std::size_t k = tail; k < plus.size(); ++k)
      tail_max = std::max({tail_max, std::abs(plus[k]), std::abs(minus[k])});
    if (tail_max <= 1e-14 * peak || length >= 16384)
      return assemble_filter(std::move(plus), std::move(minus), m, cep);
  }
}

/// Realizes the mechanism response exp(-i g(lambda)) as a finite filter.
///
/// The phase of the mechanism ends at g(pi) = pi, so its periodic odd
/// continuation jumps by 2 pi at Nyquist and a direct sine expansion keeps
/// an O(1) Gibbs band there at every order.  The integer ramp is therefore
/// split off analytically: g = delay*lambda + g~, with delay = round(g(pi)/pi)
/// and g~ continuous and periodic.  exp(-i delay lambda) = z^delay is an
/// exact shift of the impulse response; the cepstral machinery runs on the
/// fast-converging remainder.
inline AllPassFilter build_phase_filter(const PhaseFunction& g, int k_max, int m) {
  const double ramp = g.values.back() / std::numbers::pi;
  const int delay = static_cast<int>(std::lround(ramp));
  PhaseFunction smooth = g;
  if (delay != 0)
    for (std::size_t j = 0; j < smooth.values.size(); ++j)
      smooth.values[j] -= delay * smooth.grid.points[j];

  const CepstralCoeffs cep = cepstral_coeffs(smooth, k_max);
  const int pad = std::abs(delay);
  AllPassFilter base = build_allpass(cep, m + pad);
  if (pad == 0) return base;

  AllPassFilter filter;
  filter.cepstral = base.cepstral;
  filter.m = m;
  filter.delay = delay;
  filter.psi_plus.assign(base.psi_plus.begin(),
                         base.psi_plus.begin() + m + 1);
  filter.psi_minus.assign(base.psi_minus.begin(),
                          base.psi_minus.begin() + m + 1);
  filter.impulse.assign(2 * static_cast<std::size_t>(m) + 1, 0.0);
  for (int j = -m; j <= m; ++j)
    filter.impulse[static_cast<std::size_t>(j + m)] = base.psi(j - delay);

  const auto ref = FrequencyGrid::make(2048);
  double defect = 0.0;
  for (const auto& v : impulse_response_values(filter, ref))
    defect = std::max(defect, std::abs(std::abs(v) - 1.0));
  filter.unitarity_defect = defect;
  return filter;
}

/// Exact convolution of the extended series with the filter:
/// out_t = sum_{j=-M..M} psi_j ext_{t-j} for t = 1..T, where ext covers
/// times -M+1 .. T+M.
inline TimeSeries apply_filter(const AllPassFilter& filter, const TimeSeries& extended,
                               std::size_t t_len, int m) {
  if (m != filter.m) throw InvalidArgument("apply_filter: M mismatch with filter");
  if (extended.size() != t_len + 2 * static_cast<std::size_t>(m))
    throw InvalidArgument("apply_filter: extended length must be T + 2M");
  TimeSeries out;
  out.label = extended.label;
  out.values.resize(t_len);
  for (std::size_t t = 1; t <= t_len; ++t) {
    double acc = 0.0;
    for (int j = -m; j <= m; ++j) {
      const std::size_t idx =
          static_cast<std::size_t>(static_cast<long>(t) - j + m - 1);
      acc += filter.psi(j) * extended.values[idx];
    }
    out.values[t - 1] = acc;
  }
  return out;
}

}  // namespace flip
