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
#include <vector>

#include "flip/error.hpp"
#include "flip/rng.hpp"

namespace flip {

namespace detail {

/// Continued fraction for the regularized incomplete beta (modified Lentz).
/// Valid for x < (a+1)/(a+b+2); callers use the symmetry reduction first.
inline double incbeta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400; ++m) {
    const double m_d = m;
    double aa = m_d * (b - m_d) * x / ((qam + 2.0 * m_d) * (a + 2.0 * m_d));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m_d) * (qab + m_d) * x / ((a + 2.0 * m_d) * (qap + 2.0 * m_d));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  return h;  // converged to working precision for all shapes used here
}

/// Regularized incomplete beta I_x(a, b), absolute accuracy ~1e-14.
inline double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * incbeta_cf(a, b, x) / a;
  return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

/// Beta(a, b) density.
inline double beta_pdf(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) return a < 1.0 ? HUGE_VAL : (a == 1.0 ? b : 0.0);
  if (x == 1.0) return b < 1.0 ? HUGE_VAL : (b == 1.0 ? a : 0.0);
  const double ln_b = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  return std::exp(ln_b + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
}

}  // namespace detail

struct BetaComponent {
  double weight = 1.0;
  double a = 1.0;
  double b = 1.0;
};

/// Symmetrized Beta-mixture transform on [0, 1]:
///
///   R(x) = sum_j (w_j / 2) [ Beta(x | a_j, b_j) + Beta(x | b_j, a_j) ]
///
/// Every such R satisfies R(0) = 0, R(1) = 1 and R(x) + R(1-x) = 1, is
/// nondecreasing, and (for shapes >= 1) Lipschitz with constant equal to
/// the mixture density maximum.
class RFunction {
 public:
  static RFunction beta_mixture(std::vector<BetaComponent> components) {
    if (components.empty())
      throw InvalidArgument("RFunction: need at least one component");
    double wsum = 0.0;
    for (const auto& c : components) {
      if (!(c.weight > 0.0) || c.weight > 1.0)
        throw InvalidArgument("RFunction: component weights must lie in (0, 1]");
      if (c.a < 1.0 || c.b < 1.0)
        throw InvalidArgument(
            "RFunction: shape below one gives an unbounded density (no Lipschitz constant)");
      wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
      throw InvalidArgument("RFunction: weights must sum to 1");
    RFunction r;
    r.components_ = std::move(components);
    r.lipschitz_ = r.find_density_max();
    double min_shape = HUGE_VAL;
    for (const auto& c : r.components_) min_shape = std::min({min_shape, c.a, c.b});
    r.zero_derivative_order_ = static_cast<int>(std::floor(min_shape)) - 1;
    return r;
  }

  double operator()(double x) const {
    double v = 0.0;
    for (const auto& c : components_)
      v += 0.5 * c.weight *
           (detail::incbeta(c.a, c.b, x) + detail::incbeta(c.b, c.a, x));
    return v;
  }

  /// Mixture density R'(x).
  double density(double x) const {
    double v = 0.0;
    for (const auto& c : components_)
      v += 0.5 * c.weight *
           (detail::beta_pdf(c.a, c.b, x) + detail::beta_pdf(c.b, c.a, x));
    return v;
  }

  double lipschitz() const noexcept { return lipschitz_; }

  /// Largest d with R^(k)(0) = 0 for all k <= d; equals floor(min shape) - 1.
  int zero_derivative_order() const noexcept { return zero_derivative_order_; }

  const std::vector<BetaComponent>& components() const noexcept { return components_; }

 private:
  /// Grid scan of the density followed by golden-section refinement around
  /// the best bracket.
  double find_density_max() const {
    constexpr int n = 4096;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      const double p = density(x);
      if (p > best) {
        best = p;
        best_i = i;
      }
    }
    double lo = std::max(0.0, (best_i - 1.0) / n);
    double hi = std::min(1.0, (best_i + 1.0) / n);
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = density(x1), f2 = density(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = density(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = density(x1);
      }
    }
    return std::max(best, std::max(f1, f2));
  }

  std::vector<BetaComponent> components_;
  double lipschitz_ = 1.0;
  int zero_derivative_order_ = 0;
};

/// Deterministic default for a d-th order trend-invariant design:
/// equal-weight symmetric Beta(d+2, d+2) and Beta(d+3, d+3) components, so
/// the first d+1 derivatives vanish at 0.
inline RFunction default_r_for_order(int d) {
  if (d < 0) throw InvalidArgument("default_r_for_order: d must be >= 0");
  const double a = static_cast<double>(d) + 2.0;
  return RFunction::beta_mixture(
      {BetaComponent{0.5, a, a}, BetaComponent{0.5, a + 1.0, a + 1.0}});
}

/// Randomized two-component mixture preserving the d-th order
/// trend-invariant design.  A minimum shape of d+1 is what d vanishing
/// derivatives at zero require; the draw starts at 1 when d = 0 (nothing
/// has to vanish) and at d+2 otherwise.
inline RFunction random_r_for_order(int d, Rng& rng, double spread = 4.0) {
  if (d < 0) throw InvalidArgument("random_r_for_order: d must be >= 0");
  if (!(spread > 0.0)) throw InvalidArgument("random_r_for_order: spread must be > 0");
  const double lo = d == 0 ? 1.0 : static_cast<double>(d) + 2.0;
  const double w = rng.uniform(0.25, 0.75);
  std::vector<BetaComponent> comps(2);
  comps[0] = BetaComponent{w, rng.uniform(lo, lo + spread), rng.uniform(lo, lo + spread)};
  comps[1] =
      BetaComponent{1.0 - w, rng.uniform(lo, lo + spread), rng.uniform(lo, lo + spread)};
  return RFunction::beta_mixture(std::move(comps));
}

}  // namespace flip
