#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rac/config.hpp"
#include "rac/stability.hpp"

namespace rac {

struct RunnerOptions {
  std::filesystem::path out_dir = "out";
  bool plots = true;
  std::optional<std::uint64_t> seed_override;
};

struct ControllerReport {
  std::string tag;
  bool ok = false;
  std::string error;
  Metrics metrics;
  double improvement_rms_pct = 0.0;
  double improvement_final_pct = 0.0;
  std::optional<StabilityConstants> constants;
  std::optional<GainConditionResult> gain_condition;
  std::optional<SetRadii> radii;
  std::filesystem::path csv_path;
};

struct BenchmarkResult {
  bool all_ok = false;
  std::vector<ControllerReport> reports;
  std::filesystem::path summary_path;
  std::vector<std::filesystem::path> figures;
  std::vector<std::string> warnings;
};

// Runs every controller of the spec on the shared scenario (controllers in
// parallel, one worker each), writes one CSV per controller, a summary file
// and the overlay figures. A failed run is recorded in its report; the other
// runs proceed.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const RunnerOptions& options);

std::string render_summary(const BenchmarkSpec& spec, const std::vector<ControllerReport>& reports);

}  // namespace rac
