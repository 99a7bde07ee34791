// Command line driver: single runs, comparative benchmarks, config templates.

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rac/config.hpp"
#include "rac/runner.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool no_plots = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("config", opts.config_path, "configuration file")->required();
  cmd->add_option("--out", opts.out_dir, "output directory (default: out)");
  cmd->add_option("--seed", opts.seed, "override the base seed of the configuration");
  cmd->add_flag("--no-plots", opts.no_plots, "skip figure generation");
}

int do_run(const CommonOptions& opts) {
  rac::BenchmarkSpec spec = rac::parse_config(opts.config_path);
  if (spec.controllers.size() != 1) {
    std::cerr << "run expects a configuration with exactly one [controller] section ("
              << spec.controllers.size() << " found); use `rac bench` for comparisons\n";
    return 1;
  }
  if (opts.seed) spec.scenario.seed = *opts.seed;
  std::filesystem::create_directories(opts.out_dir);
  const rac::TrajectoryLog log = rac::run_simulation({spec.scenario, spec.controllers[0], 0});
  const auto csv = std::filesystem::path(opts.out_dir) / (log.tag + ".csv");
  rac::write_csv(log, csv);
  const rac::Metrics m = rac::metrics(log);
  std::printf("%s: %zu records -> %s\n", log.tag.c_str(), log.records.size(),
              csv.string().c_str());
  std::printf("  rms_error        = %.6g\n", m.rms_error);
  std::printf("  mean_error       = %.6g\n", m.mean_error);
  std::printf("  final_window_rms = %.6g\n", m.final_window_rms);
  std::printf("  max_theta_norm   = %.6g\n", m.max_theta_norm);
  return 0;
}

int do_bench(const CommonOptions& opts) {
  const rac::BenchmarkSpec spec = rac::parse_config(opts.config_path);
  rac::RunnerOptions runner;
  runner.out_dir = opts.out_dir;
  runner.plots = !opts.no_plots;
  runner.seed_override = opts.seed;
  const rac::BenchmarkResult result = rac::run_benchmark(spec, runner);
  for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
  std::printf("%-12s %-8s %12s %18s %14s\n", "controller", "status", "rms_error",
              "final_window_rms", "improvement");
  for (const auto& r : result.reports) {
    if (!r.ok) {
      std::printf("%-12s %-8s %s\n", r.tag.c_str(), "failed", r.error.c_str());
      continue;
    }
    std::printf("%-12s %-8s %12.6g %18.6g %13.2f%%\n", r.tag.c_str(), "ok",
                r.metrics.rms_error, r.metrics.final_window_rms, r.improvement_rms_pct);
  }
  std::printf("summary: %s\n", result.summary_path.string().c_str());
  for (const auto& fig : result.figures)
    std::printf("figure:  %s\n", fig.string().c_str());
  return result.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive tracking control benchmark harness"};
  app.require_subcommand(0, 1);

  bool print_config = false;
  app.add_flag("--print-config", print_config,
               "print a documented default configuration and exit");

  CommonOptions run_opts, bench_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate a single controller configuration");
  add_common(run_cmd, run_opts);
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run every configured controller and compare");
  add_common(bench_cmd, bench_opts);

  CLI11_PARSE(app, argc, argv);

  if (print_config) {
    std::cout << rac::emit_config(rac::default_benchmark());
    return 0;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_opts);
    if (bench_cmd->parsed()) return do_bench(bench_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << app.help();
  return 0;
}
