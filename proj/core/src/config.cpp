#include "rac/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rac {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& origin, int line, const std::string& key,
                 const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "' expects a number, got '" + value + "'");
  }
}

long to_long(const std::string& origin, int line, const std::string& key,
             const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "' expects an integer, got '" + value + "'");
  }
}

std::uint64_t to_uint64(const std::string& origin, int line, const std::string& key,
                        const std::string& value) {
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "key '" + key + "' expects an unsigned integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& origin, int line, const std::string& key,
             const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(origin, line, "key '" + key + "' expects true or false, got '" + value + "'");
}

// Shortest representation that parses back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

struct ParsedController {
  ControllerSpec spec;
  std::set<std::string> keys;
};

}  // namespace

BenchmarkSpec default_benchmark() {
  BenchmarkSpec spec;
  spec.baseline = "pd";
  ControllerSpec pd;
  pd.tag = "pd";
  pd.kind = ControllerKind::PD;
  ControllerSpec resnet;
  resnet.tag = "resnet";
  resnet.kind = ControllerKind::ResNet;
  resnet.blocks = 6;
  resnet.w0 = 0.5;
  spec.controllers = {pd, resnet};
  return spec;
}

BenchmarkSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

BenchmarkSpec parse_config_text(const std::string& text, const std::string& origin) {
  BenchmarkSpec spec;
  std::vector<ParsedController> controllers;
  bool baseline_set = false;

  enum class Section { None, Sim, Plant, Reference, Disturbance, Stability, Bench, Controller };
  Section section = Section::None;
  ParsedController* current = nullptr;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text_line = trim(raw);
    if (text_line.empty()) continue;

    if (text_line.front() == '[') {
      if (text_line.back() != ']') fail(origin, line, "unterminated section header");
      const std::string inner = trim(text_line.substr(1, text_line.size() - 2));
      const auto words = split_ws(inner);
      if (words.empty()) fail(origin, line, "empty section header");
      const std::string& name = words[0];
      if (name == "controller") {
        if (words.size() != 2) fail(origin, line, "[controller] needs exactly one tag");
        section = Section::Controller;
        controllers.push_back({});
        current = &controllers.back();
        current->spec.tag = words[1];
        continue;
      }
      if (words.size() != 1) fail(origin, line, "section [" + name + "] takes no arguments");
      if (name == "sim") section = Section::Sim;
      else if (name == "plant") section = Section::Plant;
      else if (name == "reference") section = Section::Reference;
      else if (name == "disturbance") section = Section::Disturbance;
      else if (name == "stability") section = Section::Stability;
      else if (name == "bench") section = Section::Bench;
      else fail(origin, line, "unknown section [" + name + "]");
      current = nullptr;
      continue;
    }

    const auto eq = text_line.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
    const std::string key = trim(text_line.substr(0, eq));
    const std::string value = trim(text_line.substr(eq + 1));
    if (key.empty()) fail(origin, line, "missing key before '='");
    if (value.empty()) fail(origin, line, "key '" + key + "' has no value");

    ScenarioSpec& sc = spec.scenario;
    switch (section) {
      case Section::None:
        fail(origin, line, "key '" + key + "' appears before any section");
      case Section::Sim:
        if (key == "dt") sc.dt = to_double(origin, line, key, value);
        else if (key == "duration") sc.duration = to_double(origin, line, key, value);
        else if (key == "seed") sc.seed = to_uint64(origin, line, key, value);
        else if (key == "offset") {
          sc.offset.clear();
          for (const auto& tok : split_ws(value))
            sc.offset.push_back(to_double(origin, line, key, tok));
        } else if (key == "zoh") sc.zoh = to_bool(origin, line, key, value);
        else if (key == "log_stride")
          sc.log_stride = static_cast<int>(to_long(origin, line, key, value));
        else fail(origin, line, "unknown key '" + key + "' in [sim]");
        break;
      case Section::Plant:
        if (key == "model") sc.plant_model = value;
        else if (key == "n") sc.n = static_cast<int>(to_long(origin, line, key, value));
        else if (key == "c1") sc.c1 = to_double(origin, line, key, value);
        else if (key == "c2") sc.c2 = to_double(origin, line, key, value);
        else if (key == "g") sc.g_variant = value;
        else fail(origin, line, "unknown key '" + key + "' in [plant]");
        break;
      case Section::Reference:
        if (key == "model") sc.reference_model = value;
        else if (key == "width") sc.width = to_double(origin, line, key, value);
        else if (key == "height") sc.height = to_double(origin, line, key, value);
        else if (key == "period") sc.period = to_double(origin, line, key, value);
        else fail(origin, line, "unknown key '" + key + "' in [reference]");
        break;
      case Section::Disturbance:
        if (key == "model") sc.disturbance_model = value;
        else if (key == "omega_bar") sc.omega_bar = to_double(origin, line, key, value);
        else fail(origin, line, "unknown key '" + key + "' in [disturbance]");
        break;
      case Section::Stability:
        if (key == "eps_bar") sc.eps_bar = to_double(origin, line, key, value);
        else if (key == "lambda_v") sc.lambda_v = to_double(origin, line, key, value);
        else if (key == "rho0") {
          const auto toks = split_ws(value);
          if (toks.size() != 3) fail(origin, line, "rho0 expects three coefficients: a2 a1 a0");
          sc.rho_a2 = to_double(origin, line, key, toks[0]);
          sc.rho_a1 = to_double(origin, line, key, toks[1]);
          sc.rho_a0 = to_double(origin, line, key, toks[2]);
        } else fail(origin, line, "unknown key '" + key + "' in [stability]");
        break;
      case Section::Bench:
        if (key == "baseline") {
          spec.baseline = value;
          baseline_set = true;
        } else fail(origin, line, "unknown key '" + key + "' in [bench]");
        break;
      case Section::Controller: {
        ControllerSpec& c = current->spec;
        current->keys.insert(key);
        if (key == "kind") {
          try {
            c.kind = controller_kind_from_name(value);
          } catch (const ConfigError& e) {
            fail(origin, line, e.what());
          }
        } else if (key == "k1") c.k1 = to_double(origin, line, key, value);
        else if (key == "k2") c.k2 = to_double(origin, line, key, value);
        else if (key == "k3") c.k3 = to_double(origin, line, key, value);
        else if (key == "neurons") c.neurons = static_cast<int>(to_long(origin, line, key, value));
        else if (key == "layers") c.layers = static_cast<int>(to_long(origin, line, key, value));
        else if (key == "blocks") c.blocks = static_cast<int>(to_long(origin, line, key, value));
        else if (key == "hidden_activation" || key == "outer_activation" ||
                 key == "shortcut_activation") {
          try {
            const ActivationKind kind = activation_from_name(value);
            if (key == "hidden_activation") c.hidden_activation = kind;
            else if (key == "outer_activation") c.outer_activation = kind;
            else c.shortcut_activation = kind;
          } catch (const ConfigError& e) {
            fail(origin, line, e.what());
          }
        } else if (key == "gamma") c.gamma = to_double(origin, line, key, value);
        else if (key == "theta_bar") c.theta_bar = to_double(origin, line, key, value);
        else if (key == "boundary_layer") c.boundary_layer = to_double(origin, line, key, value);
        else if (key == "w0") c.w0 = to_double(origin, line, key, value);
        else fail(origin, line, "unknown key '" + key + "' in [controller " + c.tag + "]");
        break;
      }
    }
  }

  // Semantic validation: collect every violation before reporting.
  std::vector<std::string> bad;
  const auto check = [&bad](bool ok, const std::string& msg) {
    if (!ok) bad.push_back(msg);
  };
  const ScenarioSpec& sc = spec.scenario;
  check(sc.dt > 0.0, "[sim] dt must be positive");
  check(sc.duration >= sc.dt, "[sim] dt must not exceed duration");
  check(sc.log_stride >= 1, "[sim] log_stride must be at least 1");
  check(sc.n >= 1, "[plant] n must be at least 1");
  check(sc.offset.size() == static_cast<size_t>(sc.n), "[sim] offset needs exactly n entries");
  check(sc.plant_model == "drag" || sc.plant_model == "zero",
        "[plant] model must be drag or zero");
  check(sc.g_variant == "identity" || sc.g_variant == "wide",
        "[plant] g must be identity or wide");
  check(sc.g_variant != "wide" || sc.n == 2, "[plant] g = wide requires n = 2");
  check(sc.reference_model == "lissajous" || sc.reference_model == "zero",
        "[reference] model must be lissajous or zero");
  check(sc.reference_model != "lissajous" || sc.n == 2, "[reference] lissajous requires n = 2");
  check(sc.width > 0.0 && sc.height > 0.0 && sc.period > 0.0,
        "[reference] width, height and period must be positive");
  check(sc.disturbance_model == "sinusoid" || sc.disturbance_model == "none",
        "[disturbance] model must be sinusoid or none");
  check(sc.disturbance_model != "sinusoid" || sc.n == 2,
        "[disturbance] sinusoid requires n = 2");
  check(sc.omega_bar >= 0.0, "[disturbance] omega_bar must be nonnegative");
  check(sc.eps_bar >= 0.0, "[stability] eps_bar must be nonnegative");
  check(sc.lambda_v > 0.0, "[stability] lambda_v must be positive");
  check(sc.rho_a2 >= 0.0 && sc.rho_a1 >= 0.0 && sc.rho_a0 >= 0.0,
        "[stability] rho0 coefficients must be nonnegative");

  check(!controllers.empty(), "at least one [controller] section is required");
  std::set<std::string> tags;
  static const std::set<std::string> arch_keys = {
      "neurons", "layers", "blocks", "hidden_activation", "outer_activation",
      "shortcut_activation", "gamma", "theta_bar", "boundary_layer", "w0"};
  for (const auto& pc : controllers) {
    const ControllerSpec& c = pc.spec;
    const std::string where = "[controller " + c.tag + "] ";
    if (!tags.insert(c.tag).second) bad.push_back(where + "duplicate tag");
    check(c.k1 > 0.0, where + "k1 must be positive");
    check(c.k2 > 0.0, where + "k2 must be positive");
    check(c.k3 >= 0.0, where + "k3 must be nonnegative");
    if (c.kind == ControllerKind::PD) {
      for (const auto& key : pc.keys)
        if (arch_keys.count(key))
          bad.push_back(where + "key '" + key + "' does not apply to kind = pd");
      continue;
    }
    check(c.neurons >= 1, where + "neurons must be at least 1");
    check(c.layers >= 1, where + "layers must be at least 1");
    check(c.blocks >= 0, where + "blocks must be nonnegative");
    if (c.kind == ControllerKind::ResNet)
      check(c.blocks >= 1, where + "kind = resnet requires blocks >= 1");
    if (c.kind == ControllerKind::DNN)
      check(c.blocks == 0, where + "kind = dnn requires blocks = 0");
    if (c.kind == ControllerKind::SNN) {
      check(c.blocks == 0, where + "kind = snn requires blocks = 0");
      check(c.layers == 1, where + "kind = snn requires layers = 1");
    }
    check(c.gamma > 0.0, where + "gamma must be positive");
    check(c.theta_bar > 0.0, where + "theta_bar must be positive");
    check(c.boundary_layer > 0.0 && c.boundary_layer < 1.0,
          where + "boundary_layer must lie in (0, 1)");
    check(c.w0 >= 0.0, where + "w0 must be nonnegative");
  }
  if (!baseline_set && !controllers.empty()) spec.baseline = controllers.front().spec.tag;
  if (baseline_set && !tags.count(spec.baseline))
    bad.push_back("[bench] baseline '" + spec.baseline + "' does not name a controller");

  if (!bad.empty()) {
    std::string msg = origin + ": invalid configuration:";
    for (const auto& b : bad) msg += "\n  - " + b;
    throw ConfigError(msg);
  }

  spec.controllers.reserve(controllers.size());
  for (auto& pc : controllers) spec.controllers.push_back(std::move(pc.spec));
  return spec;
}

std::string emit_config(const BenchmarkSpec& spec) {
  const ScenarioSpec& sc = spec.scenario;
  std::ostringstream out;
  out << "# rac benchmark configuration\n"
      << "# Sections and keys are strict; unknown names are rejected.\n"
      << "\n[sim]\n"
      << "dt = " << fmt(sc.dt) << "              # integration step, seconds\n"
      << "duration = " << fmt(sc.duration) << "        # run length, seconds\n"
      << "seed = " << sc.seed << "             # base seed; controller i draws weights with seed + i\n"
      << "offset = ";
  for (size_t i = 0; i < sc.offset.size(); ++i) out << (i ? " " : "") << fmt(sc.offset[i]);
  out << "        # initial position offset against the reference\n"
      << "zoh = " << (sc.zoh ? "true" : "false")
      << "           # true: hold u over each step instead of continuous evaluation\n"
      << "log_stride = " << sc.log_stride << "        # record every k-th step\n"
      << "\n[plant]\n"
      << "model = " << sc.plant_model << "          # drag | zero\n"
      << "n = " << sc.n << "                 # state dimension\n"
      << "c1 = " << fmt(sc.c1) << "              # quadratic drag coefficient\n"
      << "c2 = " << fmt(sc.c2) << "                # gravity-like stiffness coefficient\n"
      << "g = " << sc.g_variant << "          # identity | wide (wide: n = 2, m = 3)\n"
      << "\n[reference]\n"
      << "model = " << sc.reference_model << "     # lissajous | zero\n"
      << "width = " << fmt(sc.width) << "            # figure-eight width, meters\n"
      << "height = " << fmt(sc.height) << "            # figure-eight height, meters\n"
      << "period = " << fmt(sc.period) << "           # seconds per lap\n"
      << "\n[disturbance]\n"
      << "model = " << sc.disturbance_model << "      # sinusoid | none\n"
      << "omega_bar = " << fmt(sc.omega_bar) << "       # disturbance norm bound\n"
      << "\n[stability]\n"
      << "eps_bar = " << fmt(sc.eps_bar) << "         # assumed reconstruction-error bound (reporting only)\n"
      << "lambda_v = " << fmt(sc.lambda_v) << "        # envelope convergence-rate parameter\n"
      << "rho0 = " << fmt(sc.rho_a2) << " " << fmt(sc.rho_a1) << " " << fmt(sc.rho_a0)
      << "         # remainder polynomial coefficients a2 a1 a0\n"
      << "\n[bench]\n"
      << "baseline = " << spec.baseline << "       # improvement reference controller\n";
  for (const auto& c : spec.controllers) {
    out << "\n[controller " << c.tag << "]\n"
        << "kind = " << controller_kind_name(c.kind) << "          # pd | snn | dnn | resnet\n"
        << "k1 = " << fmt(c.k1) << "\n"
        << "k2 = " << fmt(c.k2) << "\n"
        << "k3 = " << fmt(c.k3) << "\n";
    if (c.kind == ControllerKind::PD) continue;
    out << "neurons = " << c.neurons << "          # width of every hidden layer\n"
        << "layers = " << c.layers << "           # hidden layers per block\n"
        << "blocks = " << c.blocks << "           # residual blocks beyond the input block\n"
        << "hidden_activation = " << activation_name(c.hidden_activation) << "\n"
        << "outer_activation = " << activation_name(c.outer_activation)
        << "   # last hidden layer of each block\n"
        << "shortcut_activation = " << activation_name(c.shortcut_activation) << "\n"
        << "gamma = " << fmt(c.gamma) << "       # learning rate, Gamma = gamma * I\n"
        << "theta_bar = " << fmt(c.theta_bar) << "         # search space radius\n"
        << "boundary_layer = " << fmt(c.boundary_layer)
        << "  # projection band, fraction of theta_bar\n"
        << "w0 = " << fmt(c.w0) << "            # weight init range [-w0, w0]\n";
  }
  return out.str();
}

PlantModel build_plant(const ScenarioSpec& s) {
  PlantModel model = s.plant_model == "zero"
                         ? stock::zero_plant(s.n)
                         : stock::drag_plant(s.n, s.c1, s.c2, s.g_variant == "wide");
  if (s.disturbance_model == "sinusoid") {
    model.omega = stock::sinusoid_disturbance(s.omega_bar);
    model.omega_bar = s.omega_bar;
  }
  return model;
}

ReferenceModel build_reference(const ScenarioSpec& s) {
  if (s.reference_model == "zero") return stock::zero_reference(s.n);
  return stock::lissajous_reference(s.width, s.height, s.period);
}

NetworkSpec build_network_spec(const ControllerSpec& c, int n) {
  NetworkSpec net;
  net.input_dim = 4 * n;
  net.output_dim = n;
  net.shortcut_activation = c.shortcut_activation;
  const std::vector<int> widths(static_cast<size_t>(c.layers), c.neurons);
  BlockSpec head;
  head.input_dim = 4 * n;
  head.hidden_widths = widths;
  head.output_dim = n;
  head.hidden_activation = c.hidden_activation;
  head.outer_activation = c.outer_activation;
  net.blocks.push_back(head);
  for (int i = 0; i < c.blocks; ++i) {
    BlockSpec body = head;
    body.input_dim = n;
    net.blocks.push_back(body);
  }
  return net;
}

ControllerSetup build_controller_setup(const ControllerSpec& c, const ScenarioSpec& s,
                                       int index) {
  ControllerSetup setup;
  setup.tag = c.tag;
  setup.kind = c.kind;
  setup.gains = Gains{c.k1, c.k2, c.k3};
  setup.seed = s.seed + static_cast<std::uint64_t>(index);
  if (c.kind != ControllerKind::PD) {
    setup.network = build_network_spec(c, s.n);
    setup.space = SearchSpace::ball(c.theta_bar, c.boundary_layer);
    setup.gamma = c.gamma;
    setup.w0 = c.w0;
  }
  return setup;
}

TrajectoryLog run_simulation(const SimConfig& config) {
  const ScenarioSpec& s = config.scenario;
  PlantModel plant = build_plant(s);
  const int m = plant.m;
  ClosedLoop loop(std::move(plant), build_reference(s),
                  Controller(build_controller_setup(config.controller, s, config.controller_index),
                             s.n, m));
  SimOptions options;
  options.dt = s.dt;
  options.duration = s.duration;
  options.offset = Eigen::Map<const Vector>(s.offset.data(), static_cast<Eigen::Index>(s.offset.size()));
  options.zoh = s.zoh;
  options.log_stride = s.log_stride;
  return simulate_loop(loop, options);
}

}  // namespace rac
