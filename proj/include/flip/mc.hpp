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
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flip/error.hpp"
#include "flip/pipeline.hpp"
#include "flip/rng.hpp"
#include "flip/var1.hpp"

namespace flip {

/// Linear trends added to the simulated pair, mu_t = c0 + c1 t.
struct McTrend {
  double x0 = 0.0, x1 = 0.0;
  double z0 = 0.0, z1 = 0.0;
};

struct McConfig {
  int replications = 100;
  std::size_t t_len = 200;
  double rho = 0.1;
  double sigma2 = 0.5;
  double delta = 0.0;
  int cepstral_order = 25;      // K
  int filter_half_length = 45;  // M
  int report_max_lag = 24;      // H
  int grid_size = 2048;
  int var_order = 1;            // spectral estimation: VAR(p) least squares
  std::optional<McTrend> trend;
  std::uint64_t seed = 0;

  void validate() const {
    if (replications < 1) throw InvalidArgument("mc: replications must be >= 1");
    if (t_len < 50) throw InvalidArgument("mc: T must be >= 50");
    if (!(rho > -1.0 && rho < 1.0)) throw InvalidArgument("mc: rho must lie in (-1, 1)");
    if (!(sigma2 > 0.0)) throw InvalidArgument("mc: sigma2 must be > 0");
  }
};

struct McReplicateRow {
  int replicate = 0;  // 1-based
  double privacy = 0.0;
  double d_path = 0.0;
  double d_acf = 0.0;
};

/// Type-7 (linear interpolation) quantile of a sample.
inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw InvalidArgument("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = h - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

inline constexpr std::array<double, 5> kQuantileProbs{0.1, 0.25, 0.5, 0.75, 0.9};

struct McSummary {
  std::vector<McReplicateRow> rows;
  double mean_privacy = 0.0;
  std::array<double, 5> d_path_quantiles{};
  std::array<double, 5> d_acf_quantiles{};

  nlohmann::json to_json() const {
    auto quants = [](const std::array<double, 5>& q) {
      return nlohmann::json{{"p10", q[0]}, {"p25", q[1]}, {"p50", q[2]},
                            {"p75", q[3]}, {"p90", q[4]}};
    };
    return {{"replications", rows.size()},
            {"mean_privacy", mean_privacy},
            {"d_path_quantiles", quants(d_path_quantiles)},
            {"d_acf_quantiles", quants(d_acf_quantiles)}};
  }
};

/// Simulates `replications` independent VAR(1) paths (stationary initial
/// state), runs the full mechanism on each, and aggregates privacy and
/// utility.  Replicate r owns Rng(seed, r), so results do not depend on
/// execution order; a replicate failure aborts the run with its index.
inline McSummary run_monte_carlo(const McConfig& config) {
  config.validate();
  const Var1Spec spec = riccati_var1(config.rho, config.sigma2);

  FlipConfig flip_config;
  flip_config.delta = config.delta;
  flip_config.trend_order = config.trend ? 1 : 0;
  flip_config.cepstral_order = config.cepstral_order;
  flip_config.filter_half_length = config.filter_half_length;
  flip_config.grid_size = config.grid_size;
  flip_config.estimator = SpectralEstimator::kVar;
  flip_config.var_order = config.var_order;
  flip_config.report_max_lag = config.report_max_lag;
  flip_config.seed = config.seed;

  McSummary summary;
  summary.rows.reserve(static_cast<std::size_t>(config.replications));
  double privacy_sum = 0.0;
  for (int r = 0; r < config.replications; ++r) {
    try {
      Rng rng(config.seed, static_cast<std::uint64_t>(r));
      auto [x, z] = simulate_var1(spec, config.t_len, rng);
      if (config.trend) {
        for (std::size_t t = 0; t < config.t_len; ++t) {
          const double time = static_cast<double>(t + 1);
          x.values[t] += config.trend->x0 + config.trend->x1 * time;
          z.values[t] += config.trend->z0 + config.trend->z1 * time;
        }
      }
      const FlipResult res = flip_privatize(x, z, flip_config, rng);
      summary.rows.push_back(
          {r + 1, res.report.lip, res.report.d_path, res.report.d_acf});
      privacy_sum += res.report.lip;
    } catch (const Error& e) {
      throw Error("replicate " + std::to_string(r + 1) + ": " + e.what());
    }
  }

  summary.mean_privacy = privacy_sum / static_cast<double>(config.replications);
  std::vector<double> paths, acfs;
  paths.reserve(summary.rows.size());
  acfs.reserve(summary.rows.size());
  for (const auto& row : summary.rows) {
    paths.push_back(row.d_path);
    acfs.push_back(row.d_acf);
  }
  for (std::size_t i = 0; i < kQuantileProbs.size(); ++i) {
    summary.d_path_quantiles[i] = quantile(paths, kQuantileProbs[i]);
    summary.d_acf_quantiles[i] = quantile(acfs, kQuantileProbs[i]);
  }
  return summary;
}

}  // namespace flip
