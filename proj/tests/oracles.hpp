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

// Test-only oracles, independent of the library code paths they check.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "flip/grid.hpp"
#include "flip/spectra.hpp"

namespace oracles {

/// Closed-form AR(1) spectral density f(l) = s2 / (2 pi |1 - phi e^{-il}|^2).
inline double ar1_spectrum(double phi, double s2, double lambda) {
  const double denom = 1.0 - 2.0 * phi * std::cos(lambda) + phi * phi;
  return s2 / (2.0 * std::numbers::pi * denom);
}

inline flip::SpectralDensity ar1_density(double phi, double s2, int grid_n) {
  flip::SpectralDensity f;
  f.grid = flip::FrequencyGrid::make(grid_n);
  f.values.resize(f.grid.size());
  for (std::size_t j = 0; j < f.grid.size(); ++j)
    f.values[j] = ar1_spectrum(phi, s2, f.grid.points[j]);
  return f;
}

/// Closed-form AR(1) autocovariance s2 phi^h / (1 - phi^2).
inline double ar1_acvf(double phi, double s2, int h) {
  return s2 * std::pow(phi, h) / (1.0 - phi * phi);
}

/// Coefficients of exp(P(z)) up to degree m, where P(z) = sum phi_k z^k has
/// no constant term.  Exact: the degree-j coefficient only draws on P^n for
/// n <= j, so the truncated factorial sum terminates.
inline std::vector<double> poly_exp(const std::vector<double>& phi, int m) {
  const auto deg = static_cast<std::size_t>(m);
  std::vector<double> p(deg + 1, 0.0);  // P truncated to degree m
  for (std::size_t k = 0; k < phi.size() && k + 1 <= deg; ++k) p[k + 1] = phi[k];
  std::vector<double> result(deg + 1, 0.0);
  result[0] = 1.0;
  std::vector<double> power(deg + 1, 0.0);  // P^n / n!
  power[0] = 1.0;
  for (std::size_t n = 1; n <= deg; ++n) {
    std::vector<double> next(deg + 1, 0.0);
    for (std::size_t i = 0; i <= deg; ++i) {
      if (power[i] == 0.0) continue;
      for (std::size_t j = 1; i + j <= deg; ++j)
        next[i + j] += power[i] * p[j] / static_cast<double>(n);
    }
    power = std::move(next);
    for (std::size_t i = 0; i <= deg; ++i) result[i] += power[i];
  }
  return result;
}

/// Bessel function of the first kind by its power series.
inline double bessel_j(int n, double x) {
  const int na = std::abs(n);
  double term = std::pow(0.5 * x, na);
  for (int i = 2; i <= na; ++i) term /= static_cast<double>(i);
  double sum = term;
  for (int k = 1; k <= 40; ++k) {
    term *= -0.25 * x * x / (static_cast<double>(k) * static_cast<double>(k + na));
    sum += term;
  }
  return (n < 0 && (na % 2 == 1)) ? -sum : sum;
}

/// Composite-trapezoid quadrature of an arbitrary callable on [0, hi] with
/// n intervals; used at high resolution as the refinement oracle.
inline double refined_quadrature(const std::function<double(double)>& f, double hi,
                                 int n) {
  const double h = hi / n;
  double s = 0.5 * (f(0.0) + f(hi));
  for (int j = 1; j < n; ++j) s += f(h * j);
  return s * h;
}

/// Direct double-loop convolution of a (2m+1)-tap filter with an extended
/// series, output t = 1..T.
inline std::vector<double> naive_convolution(const std::vector<double>& impulse,
                                             const std::vector<double>& extended,
                                             std::size_t t_len, int m) {
  std::vector<double> out(t_len, 0.0);
  for (std::size_t t = 1; t <= t_len; ++t) {
    double acc = 0.0;
    for (int j = -m; j <= m; ++j)
      acc += impulse[static_cast<std::size_t>(j + m)] *
             extended[static_cast<std::size_t>(static_cast<long>(t) - j + m - 1)];
    out[t - 1] = acc;
  }
  return out;
}

}  // namespace oracles
