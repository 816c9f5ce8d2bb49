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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "flip/beta_mixture.hpp"
#include "flip/error.hpp"
#include "flip/grid.hpp"
#include "flip/rng.hpp"
#include "flip/spectra.hpp"

namespace flip {

/// Privacy budget state for the constant-shift neighborhood.
///
/// B is the largest admissible shift; `degenerate` is raised when the
/// spectrum is too flat for the budget (sup |pi f~ - 1| <= sqrt(delta)/(L_R pi)),
/// in which case no constant-shift mechanism exists at this delta.
struct DeltaBudget {
  double delta = 0.0;
  double B = 0.0;
  bool degenerate = false;
  double drawn_delta = 0.0;        // the sampled shift, 0 iff delta == 0
  double flatness = 0.0;           // sup |pi f~ - 1| over the grid
};

/// B = sqrt(delta) / (L_R pi^2 sup|pi f~ - 1| - pi sqrt(delta)), with
/// f~ = f / int_0^pi f.  delta = 0 gives B = 0 (the optimal-filter regime).
inline DeltaBudget compute_B(const SpectralDensity& f, double delta, double l_r) {
  f.require_valid();
  if (delta < 0.0 || delta >= 1.0)
    throw InvalidArgument("compute_B: delta must lie in [0, 1)");
  if (!(l_r > 0.0)) throw InvalidArgument("compute_B: Lipschitz constant must be > 0");
  const double total = f.total();
  if (!(total > 0.0)) throw InvalidArgument("compute_B: spectrum has zero mass");

  DeltaBudget budget;
  budget.delta = delta;
  double sup = 0.0;
  for (double v : f.values)
    sup = std::max(sup, std::abs(std::numbers::pi * v / total - 1.0));
  budget.flatness = sup;
  if (delta == 0.0) {
    budget.B = 0.0;
    return budget;
  }
  const double root = std::sqrt(delta);
  if (sup <= root / (l_r * std::numbers::pi)) {
    budget.degenerate = true;
    return budget;
  }
  budget.B = root / (l_r * std::numbers::pi * std::numbers::pi * sup -
                     std::numbers::pi * root);
  return budget;
}

/// Draws the shift Delta ~ Uniform(0, B] (rejecting 0, whose filter is the
/// invertible optimum) and returns h = A (f~ + Delta) with A chosen so the
/// total mass of h equals that of f.  delta = 0 returns f unchanged.
inline SpectralDensity sample_h(const SpectralDensity& f, DeltaBudget& budget,
                                Rng& rng) {
  f.require_valid();
  if (budget.delta == 0.0) {
    budget.drawn_delta = 0.0;
    return f;
  }
  if (budget.degenerate) {
    std::ostringstream msg;
    msg << "sample_h: degenerate budget; sup|pi f~ - 1| = " << budget.flatness
        << " does not exceed sqrt(delta)/(L_R pi); pick a different neighborhood "
           "or a smaller delta";
    throw DegenerateBudget(msg.str());
  }
  if (!(budget.B > 0.0)) throw InvalidArgument("sample_h: malformed budget");

  const double shift = rng.uniform_pos() * budget.B;  // (0, B]
  budget.drawn_delta = shift;
  const double total = f.total();
  const double amp = total / (1.0 + std::numbers::pi * shift);
  SpectralDensity h;
  h.grid = f.grid;
  h.values.resize(f.values.size());
  for (std::size_t j = 0; j < f.values.size(); ++j)
    h.values[j] = amp * (f.values[j] / total + shift);
  return h;
}

/// Phase of the all-pass mechanism on [0, pi]; extended oddly elsewhere.
struct PhaseFunction {
  FrequencyGrid grid;
  std::vector<double> values;  // g(lambda_j) = pi R(H(lambda_j))
};

/// g(lambda) = pi R(H(lambda)); g(0) = 0, g(pi) = pi by the R-class and CDF
/// endpoint conditions.
inline PhaseFunction phase_function(const RFunction& r, const SpectralCdf& h) {
  PhaseFunction g;
  g.grid = h.grid;
  g.values.resize(h.values.size());
  for (std::size_t j = 0; j < h.values.size(); ++j)
    g.values[j] = std::numbers::pi * r(h.values[j]);
  return g;
}

/// The orthogonality functional int_0^pi cos(g) f / int_0^pi f.  Vanishes
/// (to quadrature accuracy) when g was built from f's own CDF; otherwise
/// its magnitude is sqrt(1 - LIP).
inline double check_perfect_privacy(const PhaseFunction& g, const SpectralDensity& f) {
  f.require_valid();
  if (!g.grid.same_as(f.grid))
    throw InvalidArgument("check_perfect_privacy: grid mismatch");
  std::vector<double> integrand(f.values.size());
  for (std::size_t j = 0; j < f.values.size(); ++j)
    integrand[j] = std::cos(g.values[j]) * f.values[j];
  return trapezoid(f.grid, integrand) / f.total();
}

}  // namespace flip
