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

// Command-line front end: privatize, simulate, metrics, compare-noise.
// Exit codes: 0 success, 1 usage error, 2 computation error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "flip/flip.hpp"

namespace {

struct PrivatizeArgs {
  std::string x_path, z_path, out;
  std::string x_column = "value", z_column = "value";
  double delta = 0.0;
  int trend_order = 0;
  int k = 25, m = 45, grid_n = 2048, h = 24;
  std::string estimator = "flattop";
  double threshold_c = -1.0;  // <0: use the default rule
  std::uint64_t seed = 1;
  bool standardize = false;
  bool direct_trend = false;
};

struct SimulateArgs {
  double rho = 0.1, sigma2 = 0.5, delta = 0.0;
  std::size_t t_len = 200;
  int reps = 100;
  int k = 25, m = 45, grid_n = 2048, h = 24;
  std::uint64_t seed = 1;
  std::vector<double> trend;  // empty or {x0, x1, z0, z1}
  std::string out;
};

struct MetricsArgs {
  std::string original, privatized;
  std::string original_column = "value", privatized_column = "value";
  int h = 24;
};

struct CompareArgs {
  std::string x_path, z_path;
  std::string x_column = "value", z_column = "value";
  double snr = 1.0, delta = 0.0;
  int trend_order = 0;
  int k = 25, m = 45, grid_n = 2048, h = 24;
  std::uint64_t seed = 1;
  std::string out;  // optional JSON destination
};

flip::FlipConfig make_config(double delta, int trend_order, int k, int m, int grid_n,
                             int h, const std::string& estimator, double threshold_c,
                             std::uint64_t seed, bool standardize, bool direct_trend) {
  flip::FlipConfig config;
  config.delta = delta;
  config.trend_order = trend_order;
  config.cepstral_order = k;
  config.filter_half_length = m;
  config.grid_size = grid_n;
  config.report_max_lag = h;
  config.seed = seed;
  config.standardize_first = standardize;
  config.direct_trend_mode = direct_trend;
  if (estimator == "flattop") {
    config.estimator = flip::SpectralEstimator::kFlatTop;
  } else if (estimator.rfind("var:", 0) == 0) {
    config.estimator = flip::SpectralEstimator::kVar;
    config.var_order = std::stoi(estimator.substr(4));
  } else {
    throw flip::InvalidArgument("unknown estimator '" + estimator +
                                "' (expected flattop or var:<p>)");
  }
  if (threshold_c > 0.0) config.flattop_threshold = threshold_c;
  return config;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw flip::IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

int run_privatize(const PrivatizeArgs& args) {
  const flip::TimeSeries x = flip::load_csv(args.x_path, args.x_column);
  const flip::TimeSeries z = flip::load_csv(args.z_path, args.z_column);
  const flip::FlipConfig config =
      make_config(args.delta, args.trend_order, args.k, args.m, args.grid_n, args.h,
                  args.estimator, args.threshold_c, args.seed, args.standardize,
                  args.direct_trend);
  flip::Rng rng(args.seed);
  const flip::FlipResult result = flip::flip_privatize(x, z, config, rng);

  std::vector<double> index(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) index[t] = static_cast<double>(t + 1);
  flip::write_csv(args.out + ".csv", {"t", args.x_column},
                  {index, result.privatized.values});
  flip::write_csv(args.out + ".paths.csv", {"t", "original", "privatized"},
                  {index, x.values, result.privatized.values});

  const auto acf_x = flip::sample_acf(x, args.h);
  const auto acf_p = flip::sample_acf(result.privatized, args.h);
  std::vector<double> lags(acf_x.size());
  for (std::size_t i = 0; i < lags.size(); ++i) lags[i] = static_cast<double>(i);
  flip::write_csv(args.out + ".acf.csv", {"lag", "acf_original", "acf_privatized"},
                  {lags, acf_x, acf_p});

  nlohmann::json report = flip::report_to_json(result.report);
  report["provenance"] = result.provenance;
  write_json(args.out + ".report.json", report);

  nlohmann::json filter = flip::filter_to_json(result.filter);
  filter["provenance"] = result.provenance;
  write_json(args.out + ".filter.json", filter);

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("privacy %.6g  d_path %.6g  d_acf %.6g\n", result.report.lip,
              result.report.d_path, result.report.d_acf);
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  flip::McConfig config;
  config.replications = args.reps;
  config.t_len = args.t_len;
  config.rho = args.rho;
  config.sigma2 = args.sigma2;
  config.delta = args.delta;
  config.cepstral_order = args.k;
  config.filter_half_length = args.m;
  config.report_max_lag = args.h;
  config.grid_size = args.grid_n;
  config.seed = args.seed;
  if (!args.trend.empty()) {
    if (args.trend.size() != 4)
      throw flip::InvalidArgument("--trend needs four values: x0 x1 z0 z1");
    config.trend = flip::McTrend{args.trend[0], args.trend[1], args.trend[2],
                                 args.trend[3]};
  }
  const flip::McSummary summary = flip::run_monte_carlo(config);

  std::vector<double> rep, privacy, dpath, dacf;
  for (const auto& row : summary.rows) {
    rep.push_back(row.replicate);
    privacy.push_back(row.privacy);
    dpath.push_back(row.d_path);
    dacf.push_back(row.d_acf);
  }
  flip::write_csv(args.out + ".replicates.csv",
                  {"replicate", "privacy", "d_path", "d_acf"},
                  {rep, privacy, dpath, dacf});

  nlohmann::json j = summary.to_json();
  j["config"] = {{"rho", args.rho},       {"sigma2", args.sigma2},
                 {"T", args.t_len},       {"reps", args.reps},
                 {"delta", args.delta},   {"K", args.k},
                 {"M", args.m},           {"H", args.h},
                 {"grid_N", args.grid_n}, {"seed", args.seed}};
  write_json(args.out + ".summary.json", j);

  std::printf("mean privacy %.6g  median d_path %.6g  median d_acf %.6g\n",
              summary.mean_privacy, summary.d_path_quantiles[2],
              summary.d_acf_quantiles[2]);
  return 0;
}

int run_metrics(const MetricsArgs& args) {
  const flip::TimeSeries x = flip::load_csv(args.original, args.original_column);
  const flip::TimeSeries xhat = flip::load_csv(args.privatized, args.privatized_column);
  const double dp = flip::d_path(x, xhat);
  const double da = flip::d_acf(x, xhat, args.h);
  std::printf("%-8s %12s\n", "metric", "value");
  std::printf("%-8s %12.6g\n", "d_path", dp);
  std::printf("%-8s %12.6g\n", "d_acf", da);
  return 0;
}

int run_compare(const CompareArgs& args) {
  const flip::TimeSeries x = flip::load_csv(args.x_path, args.x_column);
  const flip::TimeSeries z = flip::load_csv(args.z_path, args.z_column);
  const flip::FlipConfig config =
      make_config(args.delta, args.trend_order, args.k, args.m, args.grid_n, args.h,
                  "flattop", -1.0, args.seed, false, false);
  flip::Rng rng(args.seed);
  const flip::NoiseComparison cmp = flip::flip_compare_noise(x, z, config, args.snr, rng);

  std::printf("%-22s %12s\n", "quantity", "value");
  std::printf("%-22s %12.6g\n", "snr", cmp.snr);
  std::printf("%-22s %12.6g\n", "attenuation_A", cmp.attenuation);
  std::printf("%-22s %12.6g\n", "original_lag1_acf", cmp.original_lag1_acf);
  std::printf("%-22s %12.6g\n", "noise_lag1_acf", cmp.noisy_lag1_acf);
  std::printf("%-22s %12.6g\n", "noise_d_acf", cmp.noise_d_acf);
  std::printf("%-22s %12.6g\n", "flip_d_acf", cmp.flip_d_acf);
  std::printf("%-22s %12.6g\n", "flip_privacy", cmp.flip.report.lip);
  if (!args.out.empty()) write_json(args.out + ".compare.json", cmp.to_json());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flip: all-pass filter privatization for regularly sampled time series"};
  app.require_subcommand(1);

  const auto delta_check = CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        if (v < 0.0 || v >= 1.0) return "delta must satisfy 0 <= delta < 1";
        return {};
      },
      "DELTA");
  const auto rho_check = CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        if (v <= -0.999 || v >= 0.999) return "rho must lie in [-0.999, 0.999]";
        return {};
      },
      "RHO");

  PrivatizeArgs pa;
  auto* priv = app.add_subcommand("privatize", "privatize a sensitive series");
  priv->add_option("--x", pa.x_path, "sensitive series CSV")->required()
      ->check(CLI::ExistingFile);
  priv->add_option("--z", pa.z_path, "attacker (auxiliary) series CSV")->required()
      ->check(CLI::ExistingFile);
  priv->add_option("--x-column", pa.x_column, "column name in --x (default value)");
  priv->add_option("--z-column", pa.z_column, "column name in --z (default value)");
  priv->add_option("--out", pa.out, "output prefix")->required();
  priv->add_option("--delta", pa.delta, "privacy budget, 0 <= delta < 1 (default 0)")
      ->check(delta_check);
  priv->add_option("--trend-order", pa.trend_order, "polynomial trend order d (default 0)")
      ->check(CLI::Range(0, 5));
  priv->add_option("--K", pa.k, "cepstral truncation order (default 25)");
  priv->add_option("--M", pa.m, "filter half-length (default 45)");
  priv->add_option("--grid-N", pa.grid_n, "frequency grid intervals (default 2048)");
  priv->add_option("--estimator", pa.estimator,
                   "spectral estimator: flattop or var:<p> (default flattop)");
  priv->add_option("--threshold-C", pa.threshold_c,
                   "flat-top bandwidth threshold C (default max(1/T, 2 sqrt(log10 T / T)))");
  priv->add_option("--seed", pa.seed, "RNG seed (default 1)");
  priv->add_option("--H", pa.h, "max ACF lag in the report (default 24)");
  priv->add_flag("--standardize", pa.standardize,
                 "work on the standardized series, invert on output");
  priv->add_flag("--direct-trend", pa.direct_trend,
                 "filter the observations directly instead of re-adding the trend fit");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo study on a bivariate VAR(1)");
  sim->add_option("--rho", sa.rho, "cross-correlation (default 0.1)")->check(rho_check);
  sim->add_option("--sigma2", sa.sigma2, "innovation variance (default 0.5)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--T", sa.t_len, "sample length (default 200)");
  sim->add_option("--reps", sa.reps, "replications (default 100)");
  sim->add_option("--delta", sa.delta, "privacy budget (default 0)")->check(delta_check);
  sim->add_option("--seed", sa.seed, "RNG seed (default 1)");
  sim->add_option("--K", sa.k, "cepstral truncation order (default 25)");
  sim->add_option("--M", sa.m, "filter half-length (default 45)");
  sim->add_option("--H", sa.h, "max ACF lag in the report (default 24)");
  sim->add_option("--grid-N", sa.grid_n, "frequency grid intervals (default 2048)");
  sim->add_option("--trend", sa.trend,
                  "linear trends x0 x1 z0 z1 (runs the trend-invariant design at d=1)")
      ->expected(4);
  sim->add_option("--out", sa.out, "output prefix")->required();

  MetricsArgs ma;
  auto* met = app.add_subcommand("metrics", "utility discrepancies between two series");
  met->add_option("--original", ma.original, "original series CSV")->required()
      ->check(CLI::ExistingFile);
  met->add_option("--privatized", ma.privatized, "privatized series CSV")->required()
      ->check(CLI::ExistingFile);
  met->add_option("--original-column", ma.original_column, "column name (default value)");
  met->add_option("--privatized-column", ma.privatized_column,
                  "column name (default value)");
  met->add_option("--H", ma.h, "max ACF lag (default 24)");

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare-noise",
                                 "contrast the mechanism with i.i.d. noise addition");
  cmp->add_option("--x", ca.x_path, "sensitive series CSV")->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--z", ca.z_path, "attacker series CSV")->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--x-column", ca.x_column, "column name in --x (default value)");
  cmp->add_option("--z-column", ca.z_column, "column name in --z (default value)");
  cmp->add_option("--snr", ca.snr, "signal-to-noise ratio of the noise baseline")
      ->required()->check(CLI::PositiveNumber);
  cmp->add_option("--delta", ca.delta, "privacy budget (default 0)")->check(delta_check);
  cmp->add_option("--trend-order", ca.trend_order, "polynomial trend order (default 0)")
      ->check(CLI::Range(0, 5));
  cmp->add_option("--K", ca.k, "cepstral truncation order (default 25)");
  cmp->add_option("--M", ca.m, "filter half-length (default 45)");
  cmp->add_option("--grid-N", ca.grid_n, "frequency grid intervals (default 2048)");
  cmp->add_option("--H", ca.h, "max ACF lag (default 24)");
  cmp->add_option("--seed", ca.seed, "RNG seed (default 1)");
  cmp->add_option("--out", ca.out, "optional output prefix for the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (priv->parsed()) return run_privatize(pa);
    if (sim->parsed()) return run_simulate(sa);
    if (met->parsed()) return run_metrics(ma);
    if (cmp->parsed()) return run_compare(ca);
  } catch (const flip::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
