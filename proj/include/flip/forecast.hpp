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
#include <cstddef>
#include <utility>
#include <vector>

#include "flip/error.hpp"
#include "flip/series.hpp"
#include "flip/spectra.hpp"

namespace flip {

struct ExtendedSeries {
  TimeSeries series;        // length T + 2M, times -M+1 .. T+M
  bool ridge_applied = false;
};

namespace detail {

/// Best-linear-predictor forecasts at horizons 1..m given data and the
/// process ACVF, via the Durbin-Levinson recursion run out to order
/// T+m-1 with iterated projection (forecasts substitute for the unseen
/// future, which is exact for nested linear projections).
///
/// A non-PD Toeplitz system is ridged: gamma(0) is inflated by 1e-8
/// (escalating tenfold, at most three times) and the recursion restarted.
inline std::pair<std::vector<double>, bool> blp_forecasts(
    const std::vector<double>& data, std::vector<double> gamma, int m) {
  const std::size_t t_len = data.size();
  const std::size_t order = t_len + static_cast<std::size_t>(m) - 1;
  if (gamma.size() < order + 1)
    throw InvalidArgument("blp_forecasts: ACVF shorter than T + M - 1 lags");
  if (!(gamma[0] > 0.0)) throw NumericError("blp_forecasts: gamma(0) must be > 0");

  bool ridged = false;
  double ridge = 1e-8 * gamma[0];
  for (int attempt = 0;; ++attempt) {
    // history = observed data followed by forecasts as they are produced.
    std::vector<double> history(data);
    history.reserve(t_len + static_cast<std::size_t>(m));
    std::vector<double> coef;     // phi_{n,1..n}
    std::vector<double> prev;
    coef.reserve(order);
    prev.reserve(order);
    double v = gamma[0];
    bool failed = false;
    for (std::size_t n = 0; n < order; ++n) {
      double num = gamma[n + 1];
      for (std::size_t j = 0; j < n; ++j) num -= coef[j] * gamma[n - j];
      if (!(v > 0.0)) {
        failed = true;
        break;
      }
      const double refl = num / v;
      if (!std::isfinite(refl) || std::abs(refl) >= 1.0 + 1e-12) {
        failed = true;
        break;
      }
      prev = coef;
      coef.push_back(0.0);
      for (std::size_t j = 0; j < n; ++j) coef[j] = prev[j] - refl * prev[n - 1 - j];
      coef[n] = refl;
      v *= (1.0 - refl * refl);

      // Once the order reaches the available history, emit the next forecast.
      const std::size_t have = history.size();
      if (n + 1 == have && have < t_len + static_cast<std::size_t>(m)) {
        double fc = 0.0;
        for (std::size_t j = 0; j < n + 1; ++j) fc += coef[j] * history[have - 1 - j];
        history.push_back(fc);
      }
    }
    if (!failed) {
      std::vector<double> out(history.begin() + static_cast<long>(t_len), history.end());
      return {std::move(out), ridged};
    }
    if (attempt >= 3)
      throw NumericError("blp_forecasts: ACVF not positive definite even after ridging");
    gamma[0] += ridge;
    ridge *= 10.0;
    ridged = true;
  }
}

}  // namespace detail

/// Extends x with M backcasts and M forecasts from the stationary spectrum
/// f: output covers times -M+1 .. T+M.  Backcasts use the time-reversal
/// symmetry of stationary ACVFs (forecast the reversed series).
inline ExtendedSeries forecast_backcast_extend(const TimeSeries& x,
                                               const SpectralDensity& f, int m) {
  x.require_valid();
  if (x.size() < 4) throw InvalidArgument("forecast_backcast_extend: need T >= 4");
  if (m < 0) throw InvalidArgument("forecast_backcast_extend: M must be >= 0");

  ExtendedSeries out;
  out.series.label = x.label;
  if (m == 0) {
    out.series.values = x.values;
    return out;
  }

  const int max_lag = static_cast<int>(x.size()) + m - 1;
  const std::vector<double> gamma = acvf_from_spectrum(f, max_lag);

  auto [fore, ridged_f] = detail::blp_forecasts(x.values, gamma, m);
  std::vector<double> reversed(x.values.rbegin(), x.values.rend());
  auto [back, ridged_b] = detail::blp_forecasts(reversed, gamma, m);

  out.ridge_applied = ridged_f || ridged_b;
  out.series.values.reserve(x.size() + 2 * static_cast<std::size_t>(m));
  // back[i] predicts time 1-(i+1); prepend in chronological order.
  for (std::size_t i = back.size(); i-- > 0;) out.series.values.push_back(back[i]);
  out.series.values.insert(out.series.values.end(), x.values.begin(), x.values.end());
  out.series.values.insert(out.series.values.end(), fore.begin(), fore.end());
  return out;
}

}  // namespace flip
