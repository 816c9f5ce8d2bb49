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

#include <cstddef>
#include <numbers>
#include <vector>

#include "flip/error.hpp"

namespace flip {

/// Uniform frequency grid lambda_j = pi*j/N, j = 0..N (both endpoints kept).
/// All integrals over [0, pi] use the composite trapezoid rule on this grid.
struct FrequencyGrid {
  int n = 0;                   // number of intervals N
  std::vector<double> points;  // N+1 points, 0 .. pi

  static FrequencyGrid make(int n) {
    if (n < 2) throw InvalidArgument("FrequencyGrid: need N >= 2");
    FrequencyGrid g;
    g.n = n;
    g.points.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
      g.points[static_cast<std::size_t>(j)] =
          std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    return g;
  }

  std::size_t size() const noexcept { return points.size(); }
  double step() const noexcept { return std::numbers::pi / static_cast<double>(n); }
  bool same_as(const FrequencyGrid& o) const noexcept { return n == o.n; }
};

/// Composite trapezoid of grid-sampled values over [0, pi].
inline double trapezoid(const FrequencyGrid& grid, const std::vector<double>& v) {
  if (v.size() != grid.size())
    throw InvalidArgument("trapezoid: value/grid length mismatch");
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
  return s * grid.step();
}

/// Running trapezoid: out[j] = integral over [0, lambda_j].
inline std::vector<double> cumulative_trapezoid(const FrequencyGrid& grid,
                                                const std::vector<double>& v) {
  if (v.size() != grid.size())
    throw InvalidArgument("cumulative_trapezoid: value/grid length mismatch");
  std::vector<double> out(v.size());
  out[0] = 0.0;
  const double h = grid.step();
  for (std::size_t j = 1; j < v.size(); ++j)
    out[j] = out[j - 1] + 0.5 * h * (v[j - 1] + v[j]);
  return out;
}

}  // namespace flip
