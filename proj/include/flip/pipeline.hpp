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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "flip/allpass.hpp"
#include "flip/beta_mixture.hpp"
#include "flip/error.hpp"
#include "flip/forecast.hpp"
#include "flip/metrics.hpp"
#include "flip/phase.hpp"
#include "flip/rng.hpp"
#include "flip/series.hpp"
#include "flip/spectra.hpp"

namespace flip {

/// Summary of one privatization run.  d_path and d_acf compare the detrended
/// original against the detrended privatized series; lip is the empirical
/// privacy of the exact-phase mechanism against the estimated residual
/// spectrum.
struct PrivacyReport {
  double lip = 0.0;
  double delta = 0.0;
  double d_path = 0.0;
  double d_acf = 0.0;
  double delta_draw = 0.0;
  double budget_bound = 0.0;  // B
};

enum class SpectralEstimator { kFlatTop, kVar };

struct FlipConfig {
  double delta = 0.0;
  int trend_order = 0;          // d
  int cepstral_order = 25;      // K
  int filter_half_length = 45;  // M
  int grid_size = 2048;         // N
  SpectralEstimator estimator = SpectralEstimator::kFlatTop;
  int var_order = 1;            // p, when estimator == kVar
  std::optional<double> flattop_threshold;  // C; default rule when unset
  std::optional<RFunction> r_function;      // fixed R; randomized when unset
  double r_shape_spread = 4.0;  // width of the randomized shape range
  int report_max_lag = 24;      // H
  bool standardize_first = false;  // real-data mode (Example-3 style)
  bool direct_trend_mode = false;  // filter the observations, trusting trend
                                   // invariance, instead of re-adding the fit
  std::uint64_t seed = 0;          // provenance annotation only

  void validate() const {
    if (delta < 0.0 || delta >= 1.0)
      throw InvalidArgument("config: delta must lie in [0, 1)");
    if (trend_order < 0 || trend_order > 5)
      throw InvalidArgument("config: trend order must lie in [0, 5]");
    if (cepstral_order < 1) throw InvalidArgument("config: K must be >= 1");
    if (filter_half_length < 1) throw InvalidArgument("config: M must be >= 1");
    if (grid_size < 8) throw InvalidArgument("config: grid N must be >= 8");
    if (cepstral_order > grid_size / 4)
      throw InvalidArgument("config: K must not exceed N/4");
    if (var_order < 1) throw InvalidArgument("config: VAR order must be >= 1");
    if (report_max_lag < 1) throw InvalidArgument("config: H must be >= 1");
  }
};

struct FlipResult {
  TimeSeries privatized;
  PrivacyReport report;
  AllPassFilter filter;
  nlohmann::json provenance;
  std::vector<std::string> warnings;
};

namespace detail {

inline nlohmann::json r_function_json(const RFunction& r) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : r.components())
    comps.push_back({{"weight", c.weight}, {"a", c.a}, {"b", c.b}});
  return {{"components", comps},
          {"lipschitz", r.lipschitz()},
          {"zero_derivative_order", r.zero_derivative_order()}};
}

}  // namespace detail

inline nlohmann::json filter_to_json(const AllPassFilter& filter) {
  return {{"K", filter.cepstral.order()},
          {"M", filter.m},
          {"delay", filter.delay},
          {"phi", filter.cepstral.phi},
          {"truncation_bound", filter.cepstral.truncation_bound},
          {"psi_plus", filter.psi_plus},
          {"psi_minus", filter.psi_minus},
          {"impulse", filter.impulse},
          {"unitarity_defect", filter.unitarity_defect}};
}

inline nlohmann::json report_to_json(const PrivacyReport& report) {
  return {{"lip", report.lip},
          {"delta", report.delta},
          {"d_path", report.d_path},
          {"d_acf", report.d_acf},
          {"delta_draw", report.delta_draw},
          {"budget_bound", report.budget_bound}};
}

/// Runs the seven-step mechanism:
///   1. detrend both series at order d, estimate the 2x2 spectral matrix
///      from the residuals;
///   2. conditional residual spectrum f = f_{X|Z};
///   3. pick R (d vanishing derivatives at zero), compute B, draw the shift,
///      build h and the phase g;
///   4. cepstral coefficients to order K;
///   5. filter coefficients to half-length M;
///   6. forecast/backcast-extend the X residuals from the estimated f_X;
///   7. convolve and restore trend (and scale, in standardized mode).
inline FlipResult flip_privatize(const TimeSeries& x_in, const TimeSeries& z_in,
                                 const FlipConfig& config, Rng& rng) {
  config.validate();
  x_in.require_valid();
  z_in.require_valid();
  if (x_in.size() != z_in.size())
    throw InvalidArgument("flip_privatize: series length mismatch");
  const std::size_t t_len = x_in.size();
  const int d = config.trend_order;
  const std::size_t t_min =
      std::max<std::size_t>(30, 2 * (static_cast<std::size_t>(d) + 2));
  if (t_len < t_min)
    throw InvalidArgument("flip_privatize: series too short (need T >= " +
                          std::to_string(t_min) + ")");

  FlipResult result;
  if (3 * t_len < static_cast<std::size_t>(4 * config.filter_half_length))
    result.warnings.push_back("T < 4M/3: extension dominated by forecasts");
  if (config.filter_half_length < config.cepstral_order)
    result.warnings.push_back("M < K: impulse truncation below the cepstral order");

  // Optional standardization (inverted on output).
  TimeSeries x = x_in;
  TimeSeries z = z_in;
  Standardization x_std, z_std;
  if (config.standardize_first) {
    auto sx = standardize(x_in);
    auto sz = standardize(z_in);
    x = std::move(sx.first);
    x_std = sx.second;
    z = std::move(sz.first);
    z_std = sz.second;
  }

  // (1) Detrend and estimate.
  const TrendFit fit_x = detrend_ols(x, d);
  const TrendFit fit_z = detrend_ols(z, d);
  const auto grid = FrequencyGrid::make(config.grid_size);
  SpectralMatrix spec_matrix;
  FlatTopDiagnostics flat_diag;
  if (config.estimator == SpectralEstimator::kVar) {
    const VarModel model = fit_var(fit_x.residuals, fit_z.residuals, config.var_order);
    spec_matrix = var_spectral_matrix(model, grid);
  } else {
    spec_matrix = flat_top_spectral_matrix(fit_x.residuals, fit_z.residuals, grid,
                                           config.flattop_threshold, &flat_diag);
  }

  // (2) Conditional residual spectrum.
  const SpectralDensity f_cond = conditional_spectrum(spec_matrix);

  // (3) Phase design.
  const RFunction r = config.r_function
                          ? *config.r_function
                          : random_r_for_order(d, rng, config.r_shape_spread);
  DeltaBudget budget = compute_B(f_cond, config.delta, r.lipschitz());
  const SpectralDensity h = sample_h(f_cond, budget, rng);
  const SpectralCdf h_cdf = spectral_cdf(h);
  const PhaseFunction g = phase_function(r, h_cdf);

  // (4)-(5) Filter construction.
  result.filter = build_phase_filter(g, config.cepstral_order,
                                     config.filter_half_length);
  const int m = config.filter_half_length;

  // (6) Extension of the residuals from the estimated f_X.
  const SpectralDensity f_x = spec_matrix.x_density();
  ExtendedSeries extended = forecast_backcast_extend(fit_x.residuals, f_x, m);

  // (7) Convolution and trend restoration.
  TimeSeries core;  // privatized series on the (standardized) working scale
  TimeSeries filtered_resid;
  if (config.direct_trend_mode) {
    // Filter the observations themselves: the trend rides through the
    // d-th order trend-invariant filter.  The extension carries the
    // extrapolated trend on both ends.
    auto [prefix, suffix] = extrapolate_trend(fit_x, m);
    TimeSeries ext_obs = extended.series;
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
      ext_obs.values[i] += prefix[i];
      ext_obs.values[ext_obs.size() - static_cast<std::size_t>(m) + i] += suffix[i];
    }
    for (std::size_t t = 0; t < t_len; ++t)
      ext_obs.values[static_cast<std::size_t>(m) + t] = x.values[t];
    core = apply_filter(result.filter, ext_obs, t_len, m);
    filtered_resid = core;
    for (std::size_t t = 0; t < t_len; ++t)
      filtered_resid.values[t] -= fit_x.fitted.values[t];
  } else {
    filtered_resid = apply_filter(result.filter, extended.series, t_len, m);
    core = filtered_resid;
    for (std::size_t t = 0; t < t_len; ++t)
      core.values[t] += fit_x.fitted.values[t];
  }

  result.privatized = config.standardize_first ? unstandardize(core, x_std) : core;
  result.privatized.label = x_in.label;

  // Report: empirical privacy of the exact-phase mechanism against the
  // estimated residual spectrum, plus the utility discrepancies on the
  // detrended pair.
  result.report.lip = lip_allpass(g, f_cond);
  result.report.delta = config.delta;
  result.report.delta_draw = budget.drawn_delta;
  result.report.budget_bound = budget.B;
  result.report.d_path = d_path(fit_x.residuals, filtered_resid);
  result.report.d_acf = d_acf(fit_x.residuals, filtered_resid, config.report_max_lag);

  nlohmann::json prov{
      {"delta", config.delta},
      {"trend_order", d},
      {"K", config.cepstral_order},
      {"M", m},
      {"grid_N", config.grid_size},
      {"H", config.report_max_lag},
      {"seed", config.seed},
      {"estimator", config.estimator == SpectralEstimator::kVar
                        ? "var:" + std::to_string(config.var_order)
                        : "flattop"},
      {"r_function", detail::r_function_json(r)},
      {"budget", {{"B", budget.B},
                  {"delta_draw", budget.drawn_delta},
                  {"flatness", budget.flatness},
                  {"degenerate", budget.degenerate}}},
      {"trend_coefficients_x", fit_x.coefficients},
      {"trend_coefficients_z", fit_z.coefficients},
      {"unitarity_defect", result.filter.unitarity_defect},
      {"truncation_bound", result.filter.cepstral.truncation_bound},
      {"extension_ridge_applied", extended.ridge_applied},
      {"direct_trend_mode", config.direct_trend_mode},
      {"warnings", result.warnings},
  };
  if (config.estimator == SpectralEstimator::kFlatTop)
    prov["flattop"] = {{"bandwidth", flat_diag.bandwidth},
                       {"threshold", flat_diag.threshold},
                       {"psd_clip_count", flat_diag.psd_clip_count}};
  if (config.standardize_first) {
    prov["standardization_x"] = {{"mean", x_std.mean}, {"sd", x_std.sd}};
    prov["standardization_z"] = {{"mean", z_std.mean}, {"sd", z_std.sd}};
  }
  result.provenance = std::move(prov);
  return result;
}

/// Side-by-side contrast of the mechanism against i.i.d. noise addition at
/// a given signal-to-noise ratio.
struct NoiseComparison {
  FlipResult flip;
  TimeSeries noisy;                 // x + iid gaussian noise
  double snr = 1.0;
  double attenuation = 0.0;         // A = SNR/(1+SNR)
  double flip_d_acf = 0.0;
  double noise_d_acf = 0.0;
  double original_lag1_acf = 0.0;
  double noisy_lag1_acf = 0.0;

  nlohmann::json to_json() const {
    return {{"snr", snr},
            {"attenuation", attenuation},
            {"flip_d_acf", flip_d_acf},
            {"noise_d_acf", noise_d_acf},
            {"original_lag1_acf", original_lag1_acf},
            {"noisy_lag1_acf", noisy_lag1_acf},
            {"flip_report", report_to_json(flip.report)}};
  }
};

inline NoiseComparison flip_compare_noise(const TimeSeries& x, const TimeSeries& z,
                                          const FlipConfig& config, double snr,
                                          Rng& rng) {
  if (!(snr > 0.0)) throw InvalidArgument("flip_compare_noise: SNR must be > 0");
  NoiseComparison cmp;
  cmp.snr = snr;
  cmp.flip = flip_privatize(x, z, config, rng);

  const TrendFit fit = detrend_ols(x, config.trend_order);
  const double signal_var = fit.residuals.variance();
  if (!(signal_var > 0.0))
    throw InvalidArgument("flip_compare_noise: zero-variance residuals");
  const double noise_sd = std::sqrt(signal_var / snr);
  cmp.noisy = x;
  cmp.noisy.label = x.label + ".noisy";
  for (double& v : cmp.noisy.values) v += noise_sd * rng.normal();

  TimeSeries noisy_resid = cmp.noisy;
  for (std::size_t t = 0; t < x.size(); ++t)
    noisy_resid.values[t] -= fit.fitted.values[t];

  cmp.attenuation = noise_baseline_attenuation(signal_var, noise_sd * noise_sd);
  cmp.flip_d_acf = cmp.flip.report.d_acf;
  cmp.noise_d_acf = d_acf(fit.residuals, noisy_resid, config.report_max_lag);
  cmp.original_lag1_acf = sample_acf(fit.residuals, 1)[1];
  cmp.noisy_lag1_acf = sample_acf(noisy_resid, 1)[1];
  return cmp;
}

}  // namespace flip
