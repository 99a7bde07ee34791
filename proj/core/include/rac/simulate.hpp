#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rac/adaptation.hpp"
#include "rac/control.hpp"
#include "rac/plant.hpp"

namespace rac {

// Everything needed to instantiate one controller. PD carries no network; the
// SNN/DNN/ResNet kinds all run the same forward/Jacobian/update machinery on
// their own architecture.
struct ControllerSetup {
  std::string tag = "pd";
  ControllerKind kind = ControllerKind::PD;
  Gains gains;
  std::optional<NetworkSpec> network;
  SearchSpace space;
  double gamma = 0.05;  // scalar rate, Gamma = gamma * I
  std::optional<Matrix> gamma_matrix;
  double w0 = 0.1;
  std::uint64_t seed = 0;
};

// Runtime controller. It sees the known signals (q, q_dot, q_d, q_d_dot, t,
// its own estimate) and the known effectiveness matrix; it has no access path
// to the plant drift or the disturbance.
class Controller {
 public:
  Controller(ControllerSetup setup, int n, int m);

  const ControllerSetup& setup() const { return setup_; }
  bool adaptive() const { return setup_.kind != ControllerKind::PD; }
  int param_dim() const { return adaptive() ? params0_.layout.total() : 0; }
  const ParamVector& initial_params() const { return params0_; }
  const LearningRate& learning_rate() const { return rate_; }

  struct Output {
    Vector u;
    Vector theta_dot;  // empty for PD
  };

  Output evaluate(double t, const Vector& q, const Vector& q_dot, const Vector& q_d,
                  const Vector& q_d_dot, const Vector& theta_hat, const Matrix& g_now) const;

 private:
  ControllerSetup setup_;
  int n_ = 0;
  int m_ = 0;
  ParamVector params0_;
  LearningRate rate_;
};

struct SimOptions {
  double dt = 0.02;
  double duration = 360.0;
  Vector offset;  // q(t0) = q_d(t0) + offset; velocities start matched
  bool zoh = false;
  int log_stride = 1;

  void validate() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  Vector q, q_dot, q_d, q_d_dot, e, r, u;
  double e_norm = 0.0, r_norm = 0.0, theta_norm = 0.0;
};

struct TrajectoryLog {
  std::string tag;
  int n = 0, m = 0;
  double theta_bar = 0.0;
  std::vector<TrajectoryRecord> records;
};

// State layout [q; q_dot; q_d; q_d_dot; theta_hat].
class ClosedLoop {
 public:
  ClosedLoop(PlantModel plant, ReferenceModel reference, Controller controller);

  const PlantModel& plant() const { return plant_; }
  const ReferenceModel& reference() const { return reference_; }
  const Controller& controller() const { return controller_; }
  int n() const { return plant_.n; }
  int state_dim() const { return 4 * plant_.n + controller_.param_dim(); }

  Vector initial_state(const Vector& offset) const;
  Vector derivative(double t, const Vector& state) const;

 private:
  PlantModel plant_;
  ReferenceModel reference_;
  Controller controller_;
};

using DerivativeFn = std::function<Vector(double, const Vector&)>;

// Classical fourth-order Runge-Kutta step.
Vector rk4_step(const DerivativeFn& f, const Vector& state, double t, double dt);

TrajectoryLog simulate_loop(const ClosedLoop& loop, const SimOptions& options);

struct Metrics {
  double rms_error = 0.0;
  double mean_error = 0.0;
  double final_window_rms = 0.0;  // over the last 20% of the run
  double max_theta_norm = 0.0;
};

Metrics metrics(const TrajectoryLog& log);
Metrics metrics_from_norms(const std::vector<double>& e_norms, const std::vector<double>& theta_norms);

// 100 * (base - ours) / base; 0 when base is 0.
double percent_improvement(double base, double ours);

// Header t,q1..qn,qd1..qdn,e_norm,r_norm,theta_hat_norm,u1..um; values with
// 9 significant digits, one row per record.
void write_csv(const TrajectoryLog& log, const std::filesystem::path& path);

}  // namespace rac
