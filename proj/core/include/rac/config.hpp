#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rac/simulate.hpp"

namespace rac {

// Parsed form of the shared sections ([sim], [plant], [reference],
// [disturbance], [stability]). Raw values as written in the file; the
// builders below turn them into runtime models.
struct ScenarioSpec {
  // [sim]
  double dt = 0.02;
  double duration = 360.0;
  std::uint64_t seed = 42;
  std::vector<double> offset = {1.0, 0.5};
  bool zoh = false;
  int log_stride = 1;

  // [plant]
  std::string plant_model = "drag";  // drag | zero
  int n = 2;
  double c1 = 0.2;
  double c2 = 1.0;
  std::string g_variant = "identity";  // identity | wide

  // [reference]
  std::string reference_model = "lissajous";  // lissajous | zero
  double width = 15.0;
  double height = 5.0;
  double period = 60.0;

  // [disturbance]
  std::string disturbance_model = "sinusoid";  // sinusoid | none
  double omega_bar = 0.5;

  // [stability]
  double eps_bar = 0.1;
  double lambda_v = 0.1;
  double rho_a2 = 0.0;
  double rho_a1 = 0.0;
  double rho_a0 = 0.0;

  bool operator==(const ScenarioSpec&) const = default;
};

// Parsed form of one [controller <tag>] section.
struct ControllerSpec {
  std::string tag;
  ControllerKind kind = ControllerKind::PD;
  double k1 = 1.0;
  double k2 = 3.0;
  double k3 = 0.01;
  // Architecture and adaptation fields; meaningful for the adaptive kinds
  // only and rejected for PD.
  int neurons = 3;
  int layers = 1;
  int blocks = 0;
  ActivationKind hidden_activation = ActivationKind::Swish;
  ActivationKind outer_activation = ActivationKind::Tanh;
  ActivationKind shortcut_activation = ActivationKind::Swish;
  double gamma = 0.025;
  double theta_bar = 1.0;
  double boundary_layer = 0.05;  // fraction of theta_bar
  double w0 = 0.1;

  bool operator==(const ControllerSpec&) const = default;
};

struct BenchmarkSpec {
  ScenarioSpec scenario;
  std::vector<ControllerSpec> controllers;
  std::string baseline;  // tag used as the percent-improvement reference

  bool operator==(const BenchmarkSpec&) const = default;
};

BenchmarkSpec default_benchmark();

// Strict parser: unknown sections or keys fail, malformed lines report the
// line number, and every violated invariant is listed in one ConfigError.
BenchmarkSpec parse_config(const std::filesystem::path& path);
BenchmarkSpec parse_config_text(const std::string& text, const std::string& origin = "<memory>");

// Canonical text form, including the documentation comments; emit and parse
// are mutual inverses on valid specs.
std::string emit_config(const BenchmarkSpec& spec);

PlantModel build_plant(const ScenarioSpec& s);
ReferenceModel build_reference(const ScenarioSpec& s);
NetworkSpec build_network_spec(const ControllerSpec& c, int n);
// index gives each controller its own weight-init seed (scenario seed + index).
ControllerSetup build_controller_setup(const ControllerSpec& c, const ScenarioSpec& s, int index);

struct SimConfig {
  ScenarioSpec scenario;
  ControllerSpec controller;
  int controller_index = 0;
};

TrajectoryLog run_simulation(const SimConfig& config);

}  // namespace rac
