#include "rac/runner.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include "rac/plots.hpp"

#include <json.hpp>

namespace rac {

namespace {

// Value as it survives the 9-significant-digit CSV format; summary metrics
// are computed on these so they can be recomputed from the emitted files
// exactly.
double round9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

Metrics csv_metrics(const TrajectoryLog& log) {
  std::vector<double> e_norms, theta_norms;
  e_norms.reserve(log.records.size());
  theta_norms.reserve(log.records.size());
  for (const auto& rec : log.records) {
    e_norms.push_back(round9(rec.e_norm));
    theta_norms.push_back(round9(rec.theta_norm));
  }
  return metrics_from_norms(e_norms, theta_norms);
}

// Shortest representation that parses back to the same double, so summary
// values can be compared exactly against recomputation from the CSVs.
std::string fmt17(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

struct RunOutcome {
  ControllerReport report;
  TrajectoryLog log;
};

RunOutcome run_one(const BenchmarkSpec& spec, size_t index,
                   const std::filesystem::path& out_dir) {
  RunOutcome outcome;
  const ControllerSpec& c = spec.controllers[index];
  outcome.report.tag = c.tag;
  try {
    SimConfig config{spec.scenario, c, static_cast<int>(index)};
    outcome.log = run_simulation(config);
    outcome.report.csv_path = out_dir / (c.tag + ".csv");
    write_csv(outcome.log, outcome.report.csv_path);
    outcome.report.metrics = csv_metrics(outcome.log);
    if (c.kind != ControllerKind::PD) {
      const ReferenceModel ref = build_reference(spec.scenario);
      const int p = param_count(build_network_spec(c, spec.scenario.n));
      const LearningRate rate = LearningRate::uniform(c.gamma, p);
      const Gains gains{c.k1, c.k2, c.k3};
      outcome.report.constants = compute_constants(
          gains, rate, spec.scenario.omega_bar, spec.scenario.eps_bar, c.theta_bar,
          spec.scenario.lambda_v, ref.q_bar_d + ref.q_dot_bar_d);
      RemainderPolynomial rho{spec.scenario.rho_a2, spec.scenario.rho_a1, spec.scenario.rho_a0,
                              c.theta_bar};
      outcome.report.gain_condition = check_gain_condition(*outcome.report.constants, rho);
      outcome.report.radii = set_radii(*outcome.report.constants, rho);
    }
    outcome.report.ok = true;
  } catch (const std::exception& e) {
    outcome.report.ok = false;
    outcome.report.error = e.what();
  }
  return outcome;
}

}  // namespace

std::string render_summary(const BenchmarkSpec& spec,
                           const std::vector<ControllerReport>& reports) {
  bool all_ok = true;
  for (const auto& r : reports) all_ok = all_ok && r.ok;

  std::ostringstream out;
  out << "# rac benchmark summary\n";
  out << "ok = " << (all_ok ? "true" : "false") << "\n";
  out << "baseline = " << spec.baseline << "\n";
  out << "controllers =";
  for (const auto& r : reports) out << " " << r.tag;
  out << "\n";
  for (const auto& r : reports) {
    out << r.tag << ".status = " << (r.ok ? "ok" : "failed") << "\n";
    if (!r.ok) {
      out << r.tag << ".error = " << r.error << "\n";
      continue;
    }
    out << r.tag << ".csv = " << r.csv_path.filename().string() << "\n";
    out << r.tag << ".rms_error = " << fmt17(r.metrics.rms_error) << "\n";
    out << r.tag << ".mean_error = " << fmt17(r.metrics.mean_error) << "\n";
    out << r.tag << ".final_window_rms = " << fmt17(r.metrics.final_window_rms) << "\n";
    out << r.tag << ".max_theta_norm = " << fmt17(r.metrics.max_theta_norm) << "\n";
    out << r.tag << ".improvement_rms_pct = " << fmt17(r.improvement_rms_pct) << "\n";
    out << r.tag << ".improvement_final_window_pct = " << fmt17(r.improvement_final_pct)
        << "\n";
    if (r.constants) {
      const StabilityConstants& c = *r.constants;
      out << r.tag << ".stability.lambda1 = " << fmt17(c.lambda1) << "\n";
      out << r.tag << ".stability.lambda_phi = " << fmt17(c.lambda_phi) << "\n";
      out << r.tag << ".stability.delta = " << fmt17(c.delta) << "\n";
      out << r.tag << ".stability.k_min = " << fmt17(c.k_min) << "\n";
      out << r.tag << ".stability.lambda_v = " << fmt17(c.lambda_V) << "\n";
      out << r.tag << ".stability.ultimate_radius = " << fmt17(c.ultimate_radius) << "\n";
      out << r.tag << ".stability.gain_condition = "
          << (r.gain_condition->satisfied ? "satisfied" : "violated") << "\n";
      out << r.tag << ".stability.margin = " << fmt17(r.gain_condition->margin) << "\n";
      out << r.tag << ".stability.sets = " << set_feasibility_name(r.radii->feasibility) << "\n";
      out << r.tag << ".stability.d_radius = " << fmt17(r.radii->d_radius) << "\n";
      out << r.tag << ".stability.s_radius = " << fmt17(r.radii->s_radius) << "\n";
      out << r.tag << ".stability.omega_radius = " << fmt17(r.radii->omega_radius) << "\n";
    }
  }

  nlohmann::ordered_json doc;
  doc["ok"] = all_ok;
  doc["baseline"] = spec.baseline;
  auto& list = doc["controllers"];
  for (const auto& r : reports) {
    nlohmann::ordered_json entry;
    entry["tag"] = r.tag;
    entry["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) {
      entry["error"] = r.error;
      list.push_back(entry);
      continue;
    }
    entry["csv"] = r.csv_path.filename().string();
    entry["rms_error"] = r.metrics.rms_error;
    entry["mean_error"] = r.metrics.mean_error;
    entry["final_window_rms"] = r.metrics.final_window_rms;
    entry["max_theta_norm"] = r.metrics.max_theta_norm;
    entry["improvement_rms_pct"] = r.improvement_rms_pct;
    entry["improvement_final_window_pct"] = r.improvement_final_pct;
    if (r.constants) {
      nlohmann::ordered_json st;
      st["lambda1"] = r.constants->lambda1;
      st["lambda_phi"] = r.constants->lambda_phi;
      st["delta"] = r.constants->delta;
      st["k_min"] = r.constants->k_min;
      st["lambda_v"] = r.constants->lambda_V;
      st["ultimate_radius"] = r.constants->ultimate_radius;
      st["gain_condition"] = r.gain_condition->satisfied ? "satisfied" : "violated";
      st["margin"] = r.gain_condition->margin;
      st["sets"] = set_feasibility_name(r.radii->feasibility);
      if (r.radii->feasibility == SetFeasibility::Feasible) {
        st["d_radius"] = r.radii->d_radius;
        st["s_radius"] = r.radii->s_radius;
        st["omega_radius"] = r.radii->omega_radius;
      }
      entry["stability"] = st;
    }
    list.push_back(entry);
  }
  out << "--- machine readable ---\n" << doc.dump(2) << "\n";
  return out.str();
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec_in, const RunnerOptions& options) {
  BenchmarkSpec spec = spec_in;
  if (options.seed_override) spec.scenario.seed = *options.seed_override;
  std::filesystem::create_directories(options.out_dir);

  std::vector<std::future<RunOutcome>> futures;
  futures.reserve(spec.controllers.size());
  for (size_t i = 0; i < spec.controllers.size(); ++i)
    futures.push_back(std::async(std::launch::async, run_one, std::cref(spec), i,
                                 std::cref(options.out_dir)));

  BenchmarkResult result;
  std::vector<TrajectoryLog> logs;
  for (auto& fut : futures) {
    RunOutcome outcome = fut.get();
    if (outcome.report.ok) logs.push_back(std::move(outcome.log));
    result.reports.push_back(std::move(outcome.report));
  }

  const ControllerReport* baseline = nullptr;
  for (const auto& r : result.reports)
    if (r.tag == spec.baseline && r.ok) baseline = &r;
  for (auto& r : result.reports) {
    if (!r.ok || !baseline) continue;
    r.improvement_rms_pct =
        percent_improvement(baseline->metrics.rms_error, r.metrics.rms_error);
    r.improvement_final_pct =
        percent_improvement(baseline->metrics.final_window_rms, r.metrics.final_window_rms);
  }

  result.all_ok = true;
  for (const auto& r : result.reports) result.all_ok = result.all_ok && r.ok;

  result.summary_path = options.out_dir / "summary.txt";
  std::ofstream summary(result.summary_path);
  summary << render_summary(spec, result.reports);
  summary.close();

  if (options.plots && !logs.empty()) {
    try {
      const double ex = spec.scenario.reference_model == "lissajous" ? spec.scenario.width / 2.0 : 0.0;
      const double ey = spec.scenario.reference_model == "lissajous" ? spec.scenario.height / 2.0 : 0.0;
      result.figures = emit_plots(logs, options.out_dir, ex, ey);
    } catch (const std::exception& e) {
      result.warnings.push_back(std::string("plot generation failed, CSV output only: ") +
                                e.what());
    }
  }
  return result;
}

}  // namespace rac
