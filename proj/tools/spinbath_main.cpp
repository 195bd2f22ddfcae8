#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinbath/experiments.hpp"

namespace fs = std::filesystem;
using namespace spinbath;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> t_max;
  std::optional<long long> samples;
  std::string method = "auto";
  double discard = 0.1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "model config file (key = value lines)");
  cmd->add_option("--out-dir", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--tmax", opts.t_max,
                  "time horizon in units of 1/delta_c (default 60/alpha)");
  cmd->add_option("--samples", opts.samples, "number of trajectory samples");
  cmd->add_option("--method", opts.method,
                  "propagation method: auto|projected|exact|krylov");
  cmd->add_option("--discard", opts.discard,
                  "transient fraction dropped from time averages");
}

ModelConfig resolve_config(const CommonOpts& opts) {
  ModelConfig config;
  if (!opts.config_path.empty()) config = load_config_file(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  config.validate();
  return config;
}

RunParams resolve_params(const CommonOpts& opts) {
  RunParams params;
  if (opts.t_max) params.t_max = *opts.t_max;
  if (opts.samples) params.samples = static_cast<Index>(*opts.samples);
  params.discard = opts.discard;
  params.method = parse_method(opts.method);
  return params;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

void print_summary(const ScenarioResult& r) {
  std::cout << "method = " << to_string(r.resolved_method)
            << "\nt_max = " << format_number(r.t_max)
            << "\nz_numeric = " << format_number(r.summary.z_numeric)
            << "\nz_diag = " << format_number(r.summary.z_diag)
            << "\nfluctuation = " << format_number(r.summary.fluctuation)
            << "\nexpected = " << format_number(r.summary.expected)
            << "\nresidual = " << format_number(r.summary.residual) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"closed-system relaxation of a central spin in a finite "
               "spin bath"};
  app.require_subcommand(1);

  CommonOpts evolve_opts;
  auto* evolve = app.add_subcommand(
      "evolve", "propagate one scenario and write its trajectory");
  add_common(evolve, evolve_opts);

  CommonOpts scan_opts;
  double scan_window = 0.002;
  int scan_steps = 21;
  auto* scan = app.add_subcommand(
      "scan-detune", "diagonal-ensemble average vs detuning delta_s-delta_c");
  add_common(scan, scan_opts);
  scan->add_option("--window", scan_window, "half-width of the detuning scan");
  scan->add_option("--steps", scan_steps, "number of scan points");

  CommonOpts sweep_opts;
  std::vector<double> sweep_gammas{0.0, 0.75, 1.5, 2.25, 3.0};
  auto* sweep = app.add_subcommand(
      "sweep-gamma", "scenario summaries over intra-bath strengths");
  add_common(sweep, sweep_opts);
  sweep->add_option("--gammas", sweep_gammas,
                    "gamma values in units of alpha")
      ->delimiter(',');

  CommonOpts ens_opts;
  int realizations = 20;
  double bin_width = 0.02;
  auto* ens = app.add_subcommand(
      "ensemble", "eigenstate lambda_z histogram over coupling realizations");
  add_common(ens, ens_opts);
  ens->add_option("--realizations", realizations, "number of realizations");
  ens->add_option("--bin-width", bin_width, "histogram bin width");

  CommonOpts dual_opts;
  std::string dual_mode = "exact";
  auto* dual = app.add_subcommand(
      "duality", "original and spin-flipped dual scenario");
  add_common(dual, dual_opts);
  dual->add_option("--mode", dual_mode, "exact|physical");

  CommonOpts thermo_opts;
  int thermo_n = 0;
  auto* thermo = app.add_subcommand(
      "thermo-table", "spectral temperature and inversion per band");
  add_common(thermo, thermo_opts);
  thermo->add_option("--n-env", thermo_n, "environment size")->required();

  CLI11_PARSE(app, argc, argv);

  if (evolve->parsed()) {
    ModelConfig config = resolve_config(evolve_opts);
    ScenarioResult r = run_scenario(config, resolve_params(evolve_opts));
    r.trajectory_path = out_path(evolve_opts, "trajectory.csv");
    write_trajectory_csv(r.trajectory, *r.trajectory_path);
    write_manifest(config, &r, {{"trajectory", *r.trajectory_path}},
                   out_path(evolve_opts, "manifest.txt"));
    print_summary(r);
  } else if (scan->parsed()) {
    ModelConfig config = resolve_config(scan_opts);
    DetuneScan s = detune_scan(config, scan_window, scan_steps);
    const std::string csv = out_path(scan_opts, "detune_scan.csv");
    write_scan_csv(s.points, csv);
    write_manifest(
        config, nullptr,
        {{"scan", csv},
         {"best_detuning", format_number(s.points[s.best].param)},
         {"best_residual", format_number(s.points[s.best].residual)},
         {"degenerate", s.degenerate ? "true" : "false"}},
        out_path(scan_opts, "manifest.txt"));
    std::cout << "best_detuning = " << format_number(s.points[s.best].param)
              << "\nbest_z = " << format_number(s.points[s.best].z_avg)
              << "\nbest_residual = "
              << format_number(s.points[s.best].residual)
              << "\ndegenerate = " << (s.degenerate ? "true" : "false")
              << "\n";
  } else if (sweep->parsed()) {
    ModelConfig config = resolve_config(sweep_opts);
    RunParams params = resolve_params(sweep_opts);
    if (params.method == Method::Auto) params.method = Method::Projected;
    auto points = gamma_sweep(config, sweep_gammas, params);
    const std::string csv = out_path(sweep_opts, "gamma_sweep.csv");
    write_sweep_csv(points, csv);
    write_manifest(config, nullptr, {{"sweep", csv}},
                   out_path(sweep_opts, "manifest.txt"));
    for (const auto& p : points)
      std::cout << "gamma = " << format_number(p.gamma)
                << "  z_avg = " << format_number(p.z_avg)
                << "  std = " << format_number(p.fluctuation) << "\n";
  } else if (ens->parsed()) {
    ModelConfig config = resolve_config(ens_opts);
    EnsembleResult r = ensemble_histogram(config, realizations, bin_width);
    const std::string csv = out_path(ens_opts, "ensemble_hist.csv");
    write_histogram_csv(r.hist, csv);
    write_manifest(config, nullptr,
                   {{"histogram", csv},
                    {"realizations", std::to_string(realizations)},
                    {"values", std::to_string(r.values.size())},
                    {"mean", format_number(r.stats.mean)},
                    {"std", format_number(r.stats.stddev)},
                    {"mass_below_-0.95", format_number(r.stats.mass_below)}},
                   out_path(ens_opts, "manifest.txt"));
    std::cout << "values = " << r.values.size()
              << "\nmean = " << format_number(r.stats.mean)
              << "\nstd = " << format_number(r.stats.stddev)
              << "\nmass_below_-0.95 = " << format_number(r.stats.mass_below)
              << "\n";
  } else if (dual->parsed()) {
    ModelConfig config = resolve_config(dual_opts);
    DualityMode mode;
    if (dual_mode == "exact")
      mode = DualityMode::Exact;
    else if (dual_mode == "physical")
      mode = DualityMode::Physical;
    else
      throw ConfigError("unrecognized duality mode '" + dual_mode + "'");
    DualityResult r = duality_run(config, mode, resolve_params(dual_opts));
    const std::string orig_csv = out_path(dual_opts, "trajectory.csv");
    const std::string dual_csv = out_path(dual_opts, "trajectory_dual.csv");
    write_trajectory_csv(r.original.trajectory, orig_csv);
    write_trajectory_csv(r.dual.trajectory, dual_csv);
    write_manifest(config, &r.original,
                   {{"trajectory", orig_csv},
                    {"trajectory_dual", dual_csv},
                    {"mode", dual_mode},
                    {"dual_z_numeric",
                     format_number(r.dual.summary.z_numeric)},
                    {"dual_expected", format_number(r.dual.summary.expected)},
                    {"max_pointwise_sum",
                     format_number(r.max_pointwise_sum)}},
                   out_path(dual_opts, "manifest.txt"));
    std::cout << "z_numeric = " << format_number(r.original.summary.z_numeric)
              << "\ndual_z_numeric = "
              << format_number(r.dual.summary.z_numeric)
              << "\nmax_pointwise_sum = "
              << format_number(r.max_pointwise_sum) << "\n";
  } else if (thermo->parsed()) {
    auto table = beta_table(thermo_n);
    const std::string csv = out_path(thermo_opts, "thermo_table.csv");
    write_thermo_csv(table, csv);
    std::cout << "rows = " << table.size() << "\nwrote " << csv << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const PropagationError& e) {
    std::cerr << "propagation error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
