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
#include <complex>
#include <functional>
#include <numbers>

#include "flip/allpass.hpp"
#include "flip/beta_mixture.hpp"
#include "flip/forecast.hpp"
#include "flip/phase.hpp"
#include "flip/rng.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;

namespace {

flip::PhaseFunction phase_from(const std::function<double(double)>& fn, int n) {
  flip::PhaseFunction g;
  g.grid = flip::FrequencyGrid::make(n);
  g.values.resize(g.grid.size());
  for (std::size_t j = 0; j < g.grid.size(); ++j) g.values[j] = fn(g.grid.points[j]);
  return g;
}

flip::PhaseFunction mechanism_phase(int design_order, double ar_coeff, int n) {
  const auto r = flip::default_r_for_order(design_order);
  const auto f = oracles::ar1_density(ar_coeff, 1.0, n);
  return flip::phase_function(r, flip::spectral_cdf(f));
}

}  // namespace

TEST_CASE("cepstral_coeffs picks out sine components", "[allpass]") {
  const auto g1 = phase_from([](double l) { return std::sin(l); }, 1024);
  const auto cep1 = flip::cepstral_coeffs(g1, 8);
  CHECK_THAT(cep1.phi[0], WithinAbs(0.5, 1e-9));
  for (int k = 2; k <= 8; ++k)
    CHECK_THAT(cep1.phi[static_cast<std::size_t>(k - 1)], WithinAbs(0.0, 1e-9));

  const auto g2 =
      phase_from([](double l) { return 0.6 * std::sin(l) + 0.2 * std::sin(3 * l); }, 1024);
  const auto cep2 = flip::cepstral_coeffs(g2, 8);
  CHECK_THAT(cep2.phi[0], WithinAbs(0.3, 1e-9));
  CHECK_THAT(cep2.phi[2], WithinAbs(0.1, 1e-9));
  CHECK_THAT(cep2.phi[1], WithinAbs(0.0, 1e-9));
}

TEST_CASE("cepstral_coeffs of the sawtooth follow the alternating harmonic law",
          "[allpass]") {
  const auto g = phase_from([](double l) { return l; }, 4096);
  const auto cep = flip::cepstral_coeffs(g, 10);
  for (int k = 1; k <= 10; ++k) {
    const double expected = (k % 2 == 1 ? 1.0 : -1.0) / k;
    CHECK_THAT(cep.phi[static_cast<std::size_t>(k - 1)], WithinAbs(expected, 1e-6));
  }
}

TEST_CASE("cepstral_coeffs enforces the aliasing guard", "[allpass]") {
  const auto g = phase_from([](double l) { return std::sin(l); }, 64);
  CHECK_THROWS_AS(flip::cepstral_coeffs(g, 17), flip::InvalidArgument);
}

TEST_CASE("cepstral_recursions on trivial inputs", "[allpass]") {
  SECTION("zero phase gives the unit sequence") {
    flip::CepstralCoeffs cep;
    cep.phi = {0.0, 0.0, 0.0};
    const auto [plus, minus] = flip::cepstral_recursions(cep, 6);
    CHECK(plus[0] == 1.0);
    CHECK(minus[0] == 1.0);
    for (std::size_t j = 1; j < plus.size(); ++j) {
      CHECK(plus[j] == 0.0);
      CHECK(minus[j] == 0.0);
    }
  }
  SECTION("single coefficient gives the exponential series") {
    flip::CepstralCoeffs cep;
    cep.phi = {0.5};
    const auto [plus, minus] = flip::cepstral_recursions(cep, 6);
    CHECK_THAT(plus[3], WithinAbs(0.0208333333, 1e-9));
    for (std::size_t j = 0; j < plus.size(); ++j) {
      const double expect = std::pow(0.5, j) / std::tgamma(static_cast<double>(j) + 1.0);
      CHECK_THAT(plus[j], WithinAbs(expect, 1e-12));
      CHECK_THAT(minus[j], WithinAbs((j % 2 ? -1.0 : 1.0) * expect, 1e-12));
    }
  }
}

TEST_CASE("cepstral_recursions match the polynomial-exponential oracle",
          "[allpass]") {
  flip::Rng rng(43);
  for (int rep = 0; rep < 8; ++rep) {
    flip::CepstralCoeffs cep;
    for (int k = 0; k < 5; ++k) cep.phi.push_back(rng.uniform(-0.3, 0.3));
    const auto [plus, minus] = flip::cepstral_recursions(cep, 20);
    const auto plus_oracle = oracles::poly_exp(cep.phi, 20);
    auto negated = cep.phi;
    for (double& v : negated) v = -v;
    const auto minus_oracle = oracles::poly_exp(negated, 20);
    for (std::size_t j = 0; j <= 20; ++j) {
      CHECK_THAT(plus[j], WithinAbs(plus_oracle[j], 1e-12));
      CHECK_THAT(minus[j], WithinAbs(minus_oracle[j], 1e-12));
    }
  }
}

TEST_CASE("cepstral_recursions abort on pathological phases", "[allpass]") {
  flip::CepstralCoeffs cep;
  cep.phi = {60.0};
  CHECK_THROWS_AS(flip::cepstral_recursions(cep, 64), flip::NumericError);
}

TEST_CASE("assemble_filter with zero phase is the identity pulse", "[allpass]") {
  flip::CepstralCoeffs cep;
  cep.phi = {0.0};
  const auto filter = flip::build_allpass(cep, 5);
  for (int j = -5; j <= 5; ++j)
    CHECK_THAT(filter.psi(j), WithinAbs(j == 0 ? 1.0 : 0.0, 1e-15));
  CHECK_THAT(filter.unitarity_defect, WithinAbs(0.0, 1e-12));
}

TEST_CASE("assemble_filter reproduces the Bessel impulse response", "[allpass]") {
  // phi_1 = 0.5 only: Psi(z) = exp(0.5 (z - z^-1)), psi_j = J_j(1).
  flip::CepstralCoeffs cep;
  cep.phi = {0.5};
  const auto filter = flip::build_allpass(cep, 45);
  CHECK_THAT(filter.psi(0), WithinAbs(0.7651976866, 1e-8));
  CHECK_THAT(filter.psi(1), WithinAbs(0.4400505857, 1e-8));
  CHECK_THAT(filter.psi(-1), WithinAbs(-0.4400505857, 1e-8));
  for (int j = -45; j <= 45; ++j)
    CHECK_THAT(filter.psi(j), WithinAbs(oracles::bessel_j(j, 1.0), 1e-8));
}

TEST_CASE("mechanism filters meet the convergence threshold at K=25, M=45",
          "[allpass]") {
  for (double ar : {0.3, 0.5, 0.7}) {
    const auto g = mechanism_phase(0, ar, 2048);
    const auto filter = flip::build_phase_filter(g, 25, 45);
    CHECK(filter.delay == 1);
    CHECK(filter.unitarity_defect <= 1e-3);
  }
}

TEST_CASE("unitarity defect shrinks as M grows", "[allpass]") {
  const auto g = mechanism_phase(0, 0.5, 2048);
  double prev = 1e9;
  for (int m : {15, 30, 45, 90}) {
    const auto filter = flip::build_phase_filter(g, 25, m);
    CHECK(filter.unitarity_defect <= prev * 1.10);
    prev = filter.unitarity_defect;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("K-truncated cepstral response is exactly unimodular", "[allpass]") {
  const auto g = mechanism_phase(0, 0.6, 1024);
  for (int k : {3, 10, 25}) {
    const auto cep = flip::cepstral_coeffs(g, k);
    const auto values = flip::cepstral_response(cep, g.grid);
    for (const auto& v : values) CHECK_THAT(std::abs(v), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("Parseval mass of the converged impulse", "[allpass]") {
  const auto g = mechanism_phase(0, 0.5, 2048);
  const auto filter = flip::build_phase_filter(g, 25, 45);
  double mass = 0.0;
  for (double p : filter.impulse) mass += p * p;
  CHECK_THAT(mass, WithinAbs(1.0, 2.0 * filter.unitarity_defect + 1e-9));
  CHECK(filter.psi_plus.size() == 46);
  CHECK(filter.psi_minus.size() == 46);
  CHECK(filter.psi_plus[0] == 1.0);
  CHECK(filter.psi_minus[0] == 1.0);
}

TEST_CASE("trend invariance of the d-th order design", "[allpass]") {
  // A d=1 design applied to an exact linear polynomial reproduces it.
  const auto r = flip::default_r_for_order(1);
  const auto f = oracles::ar1_density(0.5, 1.0, 2048);
  const auto g = flip::phase_function(r, flip::spectral_cdf(f));

  auto max_rel_err = [&](int m) {
    const auto filter = flip::build_phase_filter(g, 25, m);
    double worst = 0.0;
    for (int t = 1; t <= 50; ++t) {
      double out = 0.0;
      for (int j = -m; j <= m; ++j)
        out += filter.psi(j) * (2.0 + 0.3 * (t - j));
      const double truth = 2.0 + 0.3 * t;
      worst = std::max(worst, std::abs(out - truth) / std::abs(truth));
    }
    return worst;
  };
  const double at_45 = max_rel_err(45);
  CHECK(at_45 <= 1e-3);
  CHECK(max_rel_err(90) <= at_45);
}

TEST_CASE("forecast extension of white noise is the zero mean", "[allpass]") {
  flip::SpectralDensity flat;
  flat.grid = flip::FrequencyGrid::make(512);
  flat.values.assign(flat.grid.size(), 1.0 / (2.0 * std::numbers::pi));
  flip::TimeSeries x({0.3, -0.7, 1.1, 0.2, -0.4, 0.9});
  const auto ext = flip::forecast_backcast_extend(x, flat, 3);
  REQUIRE(ext.series.size() == x.size() + 6);
  for (int i = 0; i < 3; ++i) {
    CHECK_THAT(ext.series.values[static_cast<std::size_t>(i)], WithinAbs(0.0, 1e-9));
    CHECK_THAT(ext.series.values[ext.series.size() - 1 - static_cast<std::size_t>(i)],
               WithinAbs(0.0, 1e-9));
  }
  CHECK_FALSE(ext.ridge_applied);
}

TEST_CASE("forecast extension follows the AR(1) predictor", "[allpass]") {
  const auto f = oracles::ar1_density(0.5, 1.0, 32768);
  flip::TimeSeries x({0.5, -0.3, 1.2, 2.0});
  const auto ext = flip::forecast_backcast_extend(x, f, 2);
  REQUIRE(ext.series.size() == 8);
  // Forecasts phi^h X_T.
  CHECK_THAT(ext.series.values[6], WithinAbs(1.0, 1e-4));
  CHECK_THAT(ext.series.values[7], WithinAbs(0.5, 1e-4));
  // Backcasts phi^h X_1.
  CHECK_THAT(ext.series.values[1], WithinAbs(0.25, 1e-4));
  CHECK_THAT(ext.series.values[0], WithinAbs(0.125, 1e-4));
}

TEST_CASE("backcasts equal forecasts of the reversed series", "[allpass]") {
  const auto f = oracles::ar1_density(0.7, 1.0, 4096);
  flip::Rng rng(47);
  flip::TimeSeries x;
  double state = 0.0;
  for (int t = 0; t < 60; ++t) {
    state = 0.7 * state + rng.normal();
    x.values.push_back(state);
  }
  const int m = 10;
  const auto ext = flip::forecast_backcast_extend(x, f, m);

  flip::TimeSeries reversed;
  reversed.values.assign(x.values.rbegin(), x.values.rend());
  const auto ext_rev = flip::forecast_backcast_extend(reversed, f, m);
  // The backcasts of x, read outward, are the forecasts of reversed x.
  for (int i = 0; i < m; ++i)
    CHECK_THAT(ext.series.values[static_cast<std::size_t>(m - 1 - i)],
               WithinAbs(ext_rev.series.values[static_cast<std::size_t>(m + 60 + i)],
                         1e-8));
}

TEST_CASE("apply_filter contracts", "[allpass]") {
  flip::Rng rng(53);
  flip::TimeSeries ext;
  for (int i = 0; i < 30; ++i) ext.values.push_back(rng.normal());
  const std::size_t t_len = 20;
  const int m = 5;

  SECTION("identity filter returns the central window") {
    flip::CepstralCoeffs cep;
    cep.phi = {0.0};
    const auto filter = flip::build_allpass(cep, m);
    const auto out = flip::apply_filter(filter, ext, t_len, m);
    REQUIRE(out.size() == t_len);
    for (std::size_t t = 0; t < t_len; ++t)
      CHECK_THAT(out.values[t], WithinAbs(ext.values[t + m], 1e-15));
  }
  SECTION("unit-delay impulse shifts by one") {
    flip::AllPassFilter filter;
    filter.m = m;
    filter.impulse.assign(2 * m + 1, 0.0);
    filter.impulse[static_cast<std::size_t>(1 + m)] = 1.0;  // psi_1 = 1
    const auto out = flip::apply_filter(filter, ext, t_len, m);
    for (std::size_t t = 0; t < t_len; ++t)
      CHECK(out.values[t] == ext.values[t + m - 1]);
  }
  SECTION("random filter matches the naive convolution oracle") {
    flip::AllPassFilter filter;
    filter.m = m;
    for (int j = 0; j < 2 * m + 1; ++j) filter.impulse.push_back(rng.uniform(-1, 1));
    const auto out = flip::apply_filter(filter, ext, t_len, m);
    const auto oracle = oracles::naive_convolution(filter.impulse, ext.values, t_len, m);
    for (std::size_t t = 0; t < t_len; ++t)
      CHECK_THAT(out.values[t], WithinAbs(oracle[t], 1e-12));
  }
  SECTION("length mismatch is rejected") {
    flip::AllPassFilter filter;
    filter.m = m;
    filter.impulse.assign(2 * m + 1, 0.0);
    CHECK_THROWS_AS(flip::apply_filter(filter, ext, t_len + 1, m),
                    flip::InvalidArgument);
  }
}

TEST_CASE("truncation bound is a finite diagnostic", "[allpass]") {
  const auto g = mechanism_phase(0, 0.5, 1024);
  const auto cep = flip::cepstral_coeffs(g, 20);
  CHECK(cep.truncation_bound > 0.0);
  CHECK(std::isfinite(cep.truncation_bound));
  const auto cep2 = flip::cepstral_coeffs(g, 40);
  CHECK(cep2.truncation_bound < cep.truncation_bound);
}
