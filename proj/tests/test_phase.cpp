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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "flip/beta_mixture.hpp"
#include "flip/metrics.hpp"
#include "flip/phase.hpp"
#include "flip/rng.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;

namespace {

flip::RFunction random_mixture(flip::Rng& rng) {
  const double w = rng.uniform(0.2, 0.8);
  return flip::RFunction::beta_mixture(
      {{w, rng.uniform(1.0, 6.0), rng.uniform(1.0, 6.0)},
       {1.0 - w, rng.uniform(1.0, 6.0), rng.uniform(1.0, 6.0)}});
}

/// f~ = (1 + a cos(lambda)) / pi on the grid; sup |pi f~ - 1| = a exactly.
flip::SpectralDensity cosine_bump_density(double a, int n) {
  flip::SpectralDensity f;
  f.grid = flip::FrequencyGrid::make(n);
  f.values.resize(f.grid.size());
  for (std::size_t j = 0; j < f.grid.size(); ++j)
    f.values[j] = (1.0 + a * std::cos(f.grid.points[j])) / std::numbers::pi;
  return f;
}

}  // namespace

TEST_CASE("uniform component gives the identity transform", "[phase]") {
  const auto r = flip::RFunction::beta_mixture({{1.0, 1.0, 1.0}});
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK_THAT(r(x), WithinAbs(x, 1e-12));
  CHECK_THAT(r.lipschitz(), WithinAbs(1.0, 1e-9));
  CHECK(r.zero_derivative_order() == 0);
}

TEST_CASE("any valid mixture fixes the midpoint", "[phase]") {
  flip::Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto r = random_mixture(rng);
    CHECK_THAT(r(0.5), WithinAbs(0.5, 1e-10));
  }
}

TEST_CASE("symmetric Beta(2,2) has the closed form 3x^2 - 2x^3", "[phase]") {
  const auto r = flip::RFunction::beta_mixture({{1.0, 2.0, 2.0}});
  CHECK_THAT(r(0.25), WithinAbs(0.15625, 1e-10));
  for (double x : {0.1, 0.3, 0.6, 0.9})
    CHECK_THAT(r(x), WithinAbs(3.0 * x * x - 2.0 * x * x * x, 1e-10));
  CHECK_THAT(r.lipschitz(), WithinAbs(1.5, 1e-8));
  CHECK(r.zero_derivative_order() == 1);
}

TEST_CASE("mixture construction rejects invalid parameters", "[phase]") {
  CHECK_THROWS_AS(flip::RFunction::beta_mixture({{1.0, 0.5, 2.0}}),
                  flip::InvalidArgument);  // shape below one
  CHECK_THROWS_AS(flip::RFunction::beta_mixture({{0.5, 2.0, 2.0}, {0.4, 3.0, 3.0}}),
                  flip::InvalidArgument);  // weights not normalized
}

TEST_CASE("R-class membership on a 1000-point grid", "[phase]") {
  flip::Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const auto r = random_mixture(rng);
    CHECK(r(0.0) == 0.0);
    double worst = 0.0;
    double prev = 0.0;
    bool monotone = true;
    for (int k = 0; k <= 1000; ++k) {
      const double x = k / 1000.0;
      const double v = r(x);
      worst = std::max(worst, std::abs(v + r(1.0 - x) - 1.0));
      monotone = monotone && v >= prev - 1e-12;
      prev = v;
    }
    CHECK(worst <= 1e-9);
    CHECK(monotone);
  }
}

TEST_CASE("Lipschitz certificate over random pairs", "[phase]") {
  flip::Rng rng(13);
  const auto r = random_mixture(rng);
  const double l = r.lipschitz();
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    CHECK(std::abs(r(x) - r(y)) <= l * std::abs(x - y) + 1e-9);
  }
}

TEST_CASE("default trend-invariant designs expose vanishing derivatives",
          "[phase]") {
  for (int d = 0; d <= 3; ++d) {
    const auto r = flip::default_r_for_order(d);
    CHECK(r.zero_derivative_order() == d + 1);
  }
  flip::Rng rng(19);
  for (int d = 1; d <= 3; ++d)
    CHECK(flip::random_r_for_order(d, rng).zero_derivative_order() >= d);
}

TEST_CASE("compute_B flags flat spectra as degenerate", "[phase]") {
  flip::SpectralDensity flat;
  flat.grid = flip::FrequencyGrid::make(128);
  flat.values.assign(flat.grid.size(), 2.0);
  const auto budget = flip::compute_B(flat, 0.2, 1.5);
  CHECK(budget.degenerate);
  CHECK_THAT(budget.flatness, WithinAbs(0.0, 1e-12));
}

TEST_CASE("compute_B evaluates the closed form", "[phase]") {
  const auto f = cosine_bump_density(0.5, 2048);
  const auto budget = flip::compute_B(f, 0.1, 2.0);
  REQUIRE_FALSE(budget.degenerate);
  // sqrt(0.1) / (2 pi^2 (0.5) - pi sqrt(0.1)), evaluated independently.
  CHECK_THAT(budget.B, WithinAbs(0.035627, 1e-5));
  CHECK_THAT(budget.flatness, WithinAbs(0.5, 1e-12));
}

TEST_CASE("compute_B with zero budget pins Delta to zero", "[phase]") {
  const auto f = cosine_bump_density(0.5, 256);
  auto budget = flip::compute_B(f, 0.0, 2.0);
  REQUIRE_FALSE(budget.degenerate);
  CHECK(budget.B == 0.0);
  flip::Rng rng(1);
  const auto h = flip::sample_h(f, budget, rng);
  CHECK(budget.drawn_delta == 0.0);
  for (std::size_t j = 0; j < f.values.size(); ++j) CHECK(h.values[j] == f.values[j]);
}

TEST_CASE("degenerate flag matches the analytic threshold", "[phase]") {
  const double l_r = 1.8;
  const double delta = 0.15;
  const double threshold = std::sqrt(delta) / (l_r * std::numbers::pi);
  for (double a : {0.2 * threshold, 0.9 * threshold, 1.1 * threshold, 5.0 * threshold}) {
    const auto f = cosine_bump_density(a, 512);
    const auto budget = flip::compute_B(f, delta, l_r);
    CHECK(budget.degenerate == (a <= threshold));
  }
}

TEST_CASE("sample_h preserves mass and stays in the neighborhood", "[phase]") {
  flip::Rng rng(29);
  const auto f = oracles::ar1_density(0.6, 1.3, 1024);
  const double total = f.total();
  for (double delta : {0.05, 0.1, 0.3}) {
    const auto r = random_mixture(rng);
    auto budget = flip::compute_B(f, delta, r.lipschitz());
    REQUIRE_FALSE(budget.degenerate);
    for (int rep = 0; rep < 25; ++rep) {
      auto b = budget;
      const auto h = flip::sample_h(f, b, rng);
      CHECK(b.drawn_delta > 0.0);
      CHECK(b.drawn_delta <= b.B);
      CHECK_THAT(h.total(), WithinAbs(total, 1e-10 * total));
      // Theorem-2 neighborhood: sup |h - f| <= sqrt(delta) total / (L pi^2).
      double sup = 0.0;
      for (std::size_t j = 0; j < h.values.size(); ++j)
        sup = std::max(sup, std::abs(h.values[j] - f.values[j]));
      CHECK(sup <= std::sqrt(delta) * total /
                       (r.lipschitz() * std::numbers::pi * std::numbers::pi) +
                   1e-12);
    }
  }
}

TEST_CASE("constant-shift of a flat density renormalizes to itself", "[phase]") {
  flip::SpectralDensity flat;
  flat.grid = flip::FrequencyGrid::make(256);
  flat.values.assign(flat.grid.size(), 1.0 / std::numbers::pi);
  flip::DeltaBudget budget;
  budget.delta = 0.1;
  budget.B = 0.05;  // hand-built: compute_B would flag flat spectra
  flip::Rng rng(31);
  const auto h = flip::sample_h(flat, budget, rng);
  for (std::size_t j = 1; j < h.values.size(); ++j)
    CHECK_THAT(h.values[j], WithinAbs(h.values[0], 1e-14));
  const auto cdf = flip::spectral_cdf(h);
  for (std::size_t j = 0; j < cdf.values.size(); ++j)
    CHECK_THAT(cdf.values[j], WithinAbs(h.grid.points[j] / std::numbers::pi, 1e-12));
}

TEST_CASE("sample_h refuses a degenerate budget", "[phase]") {
  flip::SpectralDensity flat;
  flat.grid = flip::FrequencyGrid::make(128);
  flat.values.assign(flat.grid.size(), 1.0);
  auto budget = flip::compute_B(flat, 0.2, 2.0);
  REQUIRE(budget.degenerate);
  flip::Rng rng(3);
  CHECK_THROWS_AS(flip::sample_h(flat, budget, rng), flip::DegenerateBudget);
}

TEST_CASE("phase_function composes R with the spectral CDF", "[phase]") {
  SECTION("identity R on a flat CDF is the sawtooth") {
    const auto r = flip::RFunction::beta_mixture({{1.0, 1.0, 1.0}});
    flip::SpectralDensity flat;
    flat.grid = flip::FrequencyGrid::make(512);
    flat.values.assign(flat.grid.size(), 1.0);
    const auto g = flip::phase_function(r, flip::spectral_cdf(flat));
    for (std::size_t j = 0; j < g.values.size(); ++j)
      CHECK_THAT(g.values[j], WithinAbs(g.grid.points[j], 1e-10));
  }
  SECTION("endpoints are pinned for any design") {
    flip::Rng rng(37);
    const auto r = random_mixture(rng);
    const auto g =
        flip::phase_function(r, flip::spectral_cdf(oracles::ar1_density(0.7, 1.0, 256)));
    CHECK(g.values.front() == 0.0);
    CHECK_THAT(g.values.back(), WithinAbs(std::numbers::pi, 1e-9));
    for (double v : g.values) CHECK(std::abs(v) <= std::numbers::pi + 1e-12);
  }
  SECTION("composition matches the refined-quadrature oracle at pi/2") {
    const auto r = flip::RFunction::beta_mixture({{1.0, 2.0, 2.0}});
    const auto f = oracles::ar1_density(0.5, 1.0, 2048);
    const auto g = flip::phase_function(r, flip::spectral_cdf(f));
    const double total = oracles::refined_quadrature(
        [](double l) { return oracles::ar1_spectrum(0.5, 1.0, l); }, std::numbers::pi,
        1 << 20);
    const double half = oracles::refined_quadrature(
        [](double l) { return oracles::ar1_spectrum(0.5, 1.0, l); },
        std::numbers::pi / 2.0, 1 << 20);
    const double x = half / total;
    const double oracle = std::numbers::pi * (3.0 * x * x - 2.0 * x * x * x);
    CHECK_THAT(g.values[1024], WithinAbs(oracle, 1e-6));
  }
}

TEST_CASE("check_perfect_privacy vanishes on the matched design", "[phase]") {
  SECTION("identity R, flat spectrum: exact cosine integral") {
    const auto r = flip::RFunction::beta_mixture({{1.0, 1.0, 1.0}});
    flip::SpectralDensity flat;
    flat.grid = flip::FrequencyGrid::make(512);
    flat.values.assign(flat.grid.size(), 1.0);
    const auto g = flip::phase_function(r, flip::spectral_cdf(flat));
    CHECK_THAT(flip::check_perfect_privacy(g, flat), WithinAbs(0.0, 1e-12));
  }
  SECTION("Beta(2,2) R with an AR(1) spectrum and its own CDF") {
    const auto r = flip::RFunction::beta_mixture({{1.0, 2.0, 2.0}});
    const auto f = oracles::ar1_density(0.5, 1.0, 2048);
    const auto g = flip::phase_function(r, flip::spectral_cdf(f));
    CHECK(std::abs(flip::check_perfect_privacy(g, f)) <= 1e-6);
  }
  SECTION("mismatched spectrum relates to lip_allpass") {
    const auto r = flip::RFunction::beta_mixture({{1.0, 2.0, 2.0}});
    const auto f_design = oracles::ar1_density(0.8, 1.0, 1024);
    const auto f_other = oracles::ar1_density(0.2, 1.0, 1024);
    const auto g = flip::phase_function(r, flip::spectral_cdf(f_design));
    const double c = flip::check_perfect_privacy(g, f_other);
    CHECK(std::abs(c) > 1e-4);  // generally nonzero off-design
    CHECK_THAT(std::abs(c), WithinAbs(std::sqrt(1.0 - flip::lip_allpass(g, f_other)),
                                      1e-12));
  }
}
