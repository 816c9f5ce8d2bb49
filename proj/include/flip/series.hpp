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
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "flip/error.hpp"

namespace flip {

/// Regularly sampled real-valued series.  The time index is implicit:
/// t = 1..T in sampling order.
struct TimeSeries {
  std::vector<double> values;
  std::string label;

  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> v, std::string lbl = {})
      : values(std::move(v)), label(std::move(lbl)) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  /// T >= 1 and every value finite.
  void require_valid() const {
    if (values.empty()) throw InvalidArgument("empty series '" + label + "'");
    for (double v : values)
      if (!std::isfinite(v))
        throw InvalidArgument("non-finite value in series '" + label + "'");
  }

  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }

  /// Biased (1/T) sample variance, the gamma(0) convention used throughout.
  double variance() const {
    const double m = mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return s / static_cast<double>(values.size());
  }
};

/// Affine transform removed by standardize(), kept for exact inversion.
struct Standardization {
  double mean = 0.0;
  double sd = 1.0;  // > 0
};

/// z_t = (x_t - mean)/sd with the unbiased (T-1) standard deviation, so the
/// output has sample mean 0 and sample sd 1.
inline std::pair<TimeSeries, Standardization> standardize(const TimeSeries& x) {
  x.require_valid();
  const std::size_t t = x.size();
  if (t < 2) throw InvalidArgument("standardize: need T >= 2");
  const double m = x.mean();
  double ss = 0.0;
  for (double v : x.values) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(t - 1));
  if (sd <= 0.0) throw InvalidArgument("standardize: constant series (sd = 0)");
  TimeSeries out;
  out.label = x.label;
  out.values.reserve(t);
  for (double v : x.values) out.values.push_back((v - m) / sd);
  return {std::move(out), Standardization{m, sd}};
}

inline TimeSeries unstandardize(const TimeSeries& z, const Standardization& s) {
  TimeSeries out;
  out.label = z.label;
  out.values.reserve(z.size());
  for (double v : z.values) out.values.push_back(v * s.sd + s.mean);
  return out;
}

/// Ordinary-least-squares polynomial trend fit over t = 1..T.
struct TrendFit {
  int order = 0;                      // d
  std::vector<double> coefficients;   // c_0..c_d in the raw t^k basis
  TimeSeries fitted;
  TimeSeries residuals;

  /// Horner evaluation of the fitted polynomial at (possibly fractional or
  /// out-of-sample) time t.
  double at(double t) const {
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;)
      acc = acc * t + coefficients[k];
    return acc;
  }
};

/// Fits sum_{k=0}^{d} c_k t^k by least squares, t = 1..T.
///
/// The normal equations are solved on a mean/scale-centered Vandermonde
/// basis u = (t - t0)/s to keep the system well conditioned for the low
/// orders used here, then the coefficients are expanded back to the raw
/// t^k basis (exact binomial expansion, d <= 5).
inline TrendFit detrend_ols(const TimeSeries& x, int d) {
  x.require_valid();
  if (d < 0) throw InvalidArgument("detrend_ols: order must be >= 0");
  const std::size_t t_len = x.size();
  if (t_len < static_cast<std::size_t>(d) + 2)
    throw InvalidArgument("detrend_ols: need T >= d + 2");

  const int m = d + 1;
  const double t0 = (static_cast<double>(t_len) + 1.0) / 2.0;
  const double scale = std::max(1.0, (static_cast<double>(t_len) - 1.0) / 2.0);

  Eigen::MatrixXd v(t_len, m);
  Eigen::VectorXd y(t_len);
  for (std::size_t i = 0; i < t_len; ++i) {
    const double u = (static_cast<double>(i + 1) - t0) / scale;
    double p = 1.0;
    for (int k = 0; k < m; ++k) {
      v(static_cast<Eigen::Index>(i), k) = p;
      p *= u;
    }
    y(static_cast<Eigen::Index>(i)) = x.values[i];
  }

  const Eigen::MatrixXd vtv = v.transpose() * v;
  const Eigen::VectorXd vty = v.transpose() * y;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(vtv);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("detrend_ols: normal equations rank-deficient");
  const Eigen::VectorXd b = ldlt.solve(vty);

  // Expand sum b_k ((t - t0)/s)^k into the raw t^k basis.
  std::vector<double> coef(m, 0.0);
  {
    // poly holds ((t - t0)/s)^k coefficients in t, built incrementally.
    std::vector<double> poly{1.0};
    for (int k = 0; k < m; ++k) {
      for (int j = 0; j <= k; ++j) coef[j] += b(k) * poly[j];
      if (k + 1 < m) {
        std::vector<double> next(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) {
          next[j] += poly[j] * (-t0 / scale);
          next[j + 1] += poly[j] / scale;
        }
        poly = std::move(next);
      }
    }
  }

  TrendFit fit;
  fit.order = d;
  fit.coefficients = std::move(coef);
  fit.fitted.label = x.label + ".trend";
  fit.residuals.label = x.label + ".resid";
  fit.fitted.values.resize(t_len);
  fit.residuals.values.resize(t_len);
  for (std::size_t i = 0; i < t_len; ++i) {
    const double f = fit.at(static_cast<double>(i + 1));
    fit.fitted.values[i] = f;
    fit.residuals.values[i] = x.values[i] - f;
  }
  return fit;
}

/// Trend values beyond the sample: prefix at t = -M+1..0 (chronological)
/// and suffix at t = T+1..T+M.
inline std::pair<std::vector<double>, std::vector<double>> extrapolate_trend(
    const TrendFit& fit, int m) {
  if (m < 0) throw InvalidArgument("extrapolate_trend: M must be >= 0");
  const auto t_len = static_cast<double>(fit.fitted.size());
  std::vector<double> prefix, suffix;
  prefix.reserve(m);
  suffix.reserve(m);
  for (int i = -m + 1; i <= 0; ++i) prefix.push_back(fit.at(i));
  for (int i = 1; i <= m; ++i) suffix.push_back(fit.at(t_len + i));
  return {std::move(prefix), std::move(suffix)};
}

}  // namespace flip
