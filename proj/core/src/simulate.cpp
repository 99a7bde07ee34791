#include "rac/simulate.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rac {

Controller::Controller(ControllerSetup setup, int n, int m)
    : setup_(std::move(setup)), n_(n), m_(m) {
  setup_.gains.validate();
  if (adaptive()) {
    if (!setup_.network) throw DimensionError("adaptive controller needs a network spec");
    const NetworkSpec& net = *setup_.network;
    net.validate();
    if (net.input_dim != 4 * n_ || net.output_dim != n_)
      throw DimensionError("controller network must map 4n -> n");
    setup_.space.validate();
    params0_ = random_params(net, setup_.w0, setup_.space.radius, setup_.seed);
    const int p = params0_.layout.total();
    rate_ = setup_.gamma_matrix ? LearningRate::full(*setup_.gamma_matrix)
                                : LearningRate::uniform(setup_.gamma, p);
    if (rate_.dim() != p) throw DimensionError("learning rate dimension != parameter count");
  }
}

Controller::Output Controller::evaluate(double t, const Vector& q, const Vector& q_dot,
                                        const Vector& q_d, const Vector& q_d_dot,
                                        const Vector& theta_hat, const Matrix& g_now) const {
  (void)t;
  const Vector e = tracking_error(q_d, q);
  const Vector e_dot = q_d_dot - q_dot;  // both velocities are known signals
  const Vector r = filtered_error(e_dot, e, setup_.gains.k1);

  Output out;
  if (adaptive()) {
    const Vector kappa = assemble_regressor(q, q_dot, q_d, q_d_dot);
    ParamVector pv{params0_.layout, theta_hat};
    LayerCache cache;
    const Vector psi_hat = resnet_forward(*setup_.network, pv, kappa, &cache);
    const Matrix jac = resnet_jacobian(*setup_.network, pv, kappa, cache);
    out.theta_dot = update_law(jac, r, theta_hat, setup_.gains.k3, rate_, setup_.space);
    out.u = control_input(e, r, psi_hat, g_now, setup_.gains);
  } else {
    out.theta_dot = Vector();
    out.u = control_input(e, r, Vector::Zero(n_), g_now, setup_.gains);
  }
  return out;
}

void SimOptions::validate() const {
  if (!(dt > 0.0)) throw InvariantError("dt must be positive");
  if (duration < 0.0) throw InvariantError("duration must be nonnegative");
  if (log_stride < 1) throw InvariantError("log stride must be at least 1");
}

ClosedLoop::ClosedLoop(PlantModel plant, ReferenceModel reference, Controller controller)
    : plant_(std::move(plant)),
      reference_(std::move(reference)),
      controller_(std::move(controller)) {
  if (plant_.n != reference_.n)
    throw DimensionError("plant and reference disagree on the state dimension");
}

Vector ClosedLoop::initial_state(const Vector& offset) const {
  if (offset.size() != plant_.n) throw DimensionError("offset length must equal n");
  Vector state = Vector::Zero(state_dim());
  const int n = plant_.n;
  state.segment(0, n) = reference_.q_d0 + offset;
  state.segment(n, n) = reference_.q_d_dot0;
  state.segment(2 * n, n) = reference_.q_d0;
  state.segment(3 * n, n) = reference_.q_d_dot0;
  if (controller_.param_dim() > 0)
    state.tail(controller_.param_dim()) = controller_.initial_params().theta;
  return state;
}

Vector ClosedLoop::derivative(double t, const Vector& state) const {
  if (state.size() != state_dim()) throw DimensionError("closed-loop state length mismatch");
  const int n = plant_.n;
  const auto q = state.segment(0, n);
  const auto q_dot = state.segment(n, n);
  const auto q_d = state.segment(2 * n, n);
  const auto q_d_dot = state.segment(3 * n, n);
  const auto theta = state.tail(controller_.param_dim());

  const Matrix g_now = plant_.g(q, q_dot, t);
  const Controller::Output ctl =
      controller_.evaluate(t, q, q_dot, q_d, q_d_dot, theta, g_now);

  Vector deriv(state.size());
  deriv.segment(0, n) = q_dot;
  deriv.segment(n, n) = plant_accel(plant_, q, q_dot, ctl.u, t);
  deriv.segment(2 * n, n) = q_d_dot;
  deriv.segment(3 * n, n) = reference_accel(reference_, q_d, q_d_dot);
  if (controller_.param_dim() > 0) deriv.tail(controller_.param_dim()) = ctl.theta_dot;
  return deriv;
}

Vector rk4_step(const DerivativeFn& f, const Vector& state, double t, double dt) {
  if (!(dt > 0.0)) throw InvariantError("rk4 step needs dt > 0");
  const Vector k1 = f(t, state);
  const Vector k2 = f(t + 0.5 * dt, state + (0.5 * dt) * k1);
  const Vector k3 = f(t + 0.5 * dt, state + (0.5 * dt) * k2);
  const Vector k4 = f(t + dt, state + dt * k3);
  return state + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
}

namespace {

// Post-step drift rule: renormalize a <= 1e-9 relative excursion onto the
// boundary, treat anything larger as an integration failure.
void clamp_theta(Eigen::Ref<Vector> theta, double radius, double t) {
  const double norm = theta.norm();
  if (norm <= radius) return;
  if (norm <= radius * (1.0 + 1e-9)) {
    theta *= radius / norm;
    return;
  }
  throw InvariantError("parameter estimate drifted off the search space at t = " +
                       std::to_string(t) + ": ||theta|| = " + std::to_string(norm));
}

void check_step_invariants(const ClosedLoop& loop, double t, const Vector& state) {
  const int n = loop.n();
  const auto q_d = state.segment(2 * n, n);
  const auto q_d_dot = state.segment(3 * n, n);
  const ReferenceModel& ref = loop.reference();
  if (q_d.norm() > ref.q_bar_d * (1.0 + 1e-9))
    throw InvariantError("reference position exceeded its declared bound at t = " +
                         std::to_string(t));
  if (q_d_dot.norm() > ref.q_dot_bar_d * (1.0 + 1e-9))
    throw InvariantError("reference velocity exceeded its declared bound at t = " +
                         std::to_string(t));
  const PlantModel& plant = loop.plant();
  if (plant.omega && plant.omega(t).norm() > plant.omega_bar * (1.0 + 1e-12))
    throw InvariantError("disturbance exceeded its declared bound at t = " + std::to_string(t));
  const Matrix g_now = plant.g(state.segment(0, n), state.segment(n, n), t);
  Eigen::JacobiSVD<Matrix> svd(g_now);
  if (svd.singularValues().minCoeff() <= 1e-6)
    throw InvariantError("control effectiveness matrix lost row rank at t = " +
                         std::to_string(t));
}

TrajectoryRecord make_record(const ClosedLoop& loop, double t, const Vector& state) {
  const int n = loop.n();
  TrajectoryRecord rec;
  rec.t = t;
  rec.q = state.segment(0, n);
  rec.q_dot = state.segment(n, n);
  rec.q_d = state.segment(2 * n, n);
  rec.q_d_dot = state.segment(3 * n, n);
  rec.e = tracking_error(rec.q_d, rec.q);
  rec.r = filtered_error(rec.q_d_dot - rec.q_dot, rec.e, loop.controller().setup().gains.k1);
  const Matrix g_now = loop.plant().g(rec.q, rec.q_dot, t);
  rec.u = loop.controller()
              .evaluate(t, rec.q, rec.q_dot, rec.q_d, rec.q_d_dot,
                        state.tail(loop.controller().param_dim()), g_now)
              .u;
  rec.e_norm = rec.e.norm();
  rec.r_norm = rec.r.norm();
  rec.theta_norm = loop.controller().param_dim() > 0
                       ? state.tail(loop.controller().param_dim()).norm()
                       : 0.0;
  return rec;
}

}  // namespace

TrajectoryLog simulate_loop(const ClosedLoop& loop, const SimOptions& options) {
  options.validate();
  const int n = loop.n();
  const int p = loop.controller().param_dim();
  Vector offset = options.offset;
  if (offset.size() == 0) offset = Vector::Zero(n);

  TrajectoryLog log;
  log.tag = loop.controller().setup().tag;
  log.n = n;
  log.m = loop.plant().m;
  log.theta_bar = loop.controller().adaptive() ? loop.controller().setup().space.radius : 0.0;

  Vector state = loop.initial_state(offset);
  const long steps = static_cast<long>(std::floor(options.duration / options.dt + 1e-9));
  log.records.reserve(static_cast<size_t>(steps / options.log_stride) + 2);
  log.records.push_back(make_record(loop, 0.0, state));

  const DerivativeFn deriv = [&loop](double t, const Vector& s) {
    return loop.derivative(t, s);
  };

  for (long step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * options.dt;
    if (options.zoh) {
      // Hold u over the step; the estimate advances by explicit Euler and is
      // projected back onto the ball, the discrete-time analogue of the
      // continuous projection.
      const auto q = state.segment(0, n);
      const auto q_dot = state.segment(n, n);
      const Matrix g_now = loop.plant().g(q, q_dot, t);
      const Controller::Output ctl = loop.controller().evaluate(
          t, q, q_dot, state.segment(2 * n, n), state.segment(3 * n, n), state.tail(p), g_now);
      const DerivativeFn held = [&loop, &ctl, n, p](double tt, const Vector& s) {
        Vector d = Vector::Zero(s.size());
        d.segment(0, n) = s.segment(n, n);
        d.segment(n, n) = plant_accel(loop.plant(), s.segment(0, n), s.segment(n, n), ctl.u, tt);
        d.segment(2 * n, n) = s.segment(3 * n, n);
        d.segment(3 * n, n) =
            reference_accel(loop.reference(), s.segment(2 * n, n), s.segment(3 * n, n));
        return d;
      };
      state = rk4_step(held, state, t, options.dt);
      if (p > 0) {
        state.tail(p) += options.dt * ctl.theta_dot;
        const double radius = loop.controller().setup().space.radius;
        const double norm = state.tail(p).norm();
        if (norm > radius) state.tail(p) *= radius / norm;
      }
    } else {
      state = rk4_step(deriv, state, t, options.dt);
      if (p > 0)
        clamp_theta(state.tail(p), loop.controller().setup().space.radius, t + options.dt);
    }
    const double t_next = static_cast<double>(step + 1) * options.dt;
    check_step_invariants(loop, t_next, state);
    if ((step + 1) % options.log_stride == 0 || step + 1 == steps)
      log.records.push_back(make_record(loop, t_next, state));
  }
  return log;
}

Metrics metrics_from_norms(const std::vector<double>& e_norms,
                           const std::vector<double>& theta_norms) {
  if (e_norms.empty()) throw InvariantError("metrics need a non-empty log");
  Metrics out;
  double sum_sq = 0.0, sum = 0.0;
  for (double v : e_norms) {
    sum_sq += v * v;
    sum += v;
  }
  const size_t count = e_norms.size();
  out.rms_error = std::sqrt(sum_sq / static_cast<double>(count));
  out.mean_error = sum / static_cast<double>(count);

  const size_t window = std::max<size_t>(1, count / 5);
  double tail_sq = 0.0;
  for (size_t i = count - window; i < count; ++i) tail_sq += e_norms[i] * e_norms[i];
  out.final_window_rms = std::sqrt(tail_sq / static_cast<double>(window));

  for (double v : theta_norms) out.max_theta_norm = std::max(out.max_theta_norm, v);
  return out;
}

Metrics metrics(const TrajectoryLog& log) {
  std::vector<double> e_norms, theta_norms;
  e_norms.reserve(log.records.size());
  theta_norms.reserve(log.records.size());
  for (const auto& rec : log.records) {
    e_norms.push_back(rec.e_norm);
    theta_norms.push_back(rec.theta_norm);
  }
  return metrics_from_norms(e_norms, theta_norms);
}

double percent_improvement(double base, double ours) {
  if (base == 0.0) return 0.0;
  return 100.0 * (base - ours) / base;
}

void write_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "t";
  for (int i = 1; i <= log.n; ++i) out << ",q" << i;
  for (int i = 1; i <= log.n; ++i) out << ",qd" << i;
  out << ",e_norm,r_norm,theta_hat_norm";
  for (int i = 1; i <= log.m; ++i) out << ",u" << i;
  out << "\n";
  char buf[32];
  const auto put = [&](double v, bool lead_comma = true) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    if (lead_comma) out << ',';
    out << buf;
  };
  for (const auto& rec : log.records) {
    put(rec.t, false);
    for (int i = 0; i < log.n; ++i) put(rec.q[i]);
    for (int i = 0; i < log.n; ++i) put(rec.q_d[i]);
    put(rec.e_norm);
    put(rec.r_norm);
    put(rec.theta_norm);
    for (int i = 0; i < log.m; ++i) put(rec.u[i]);
    out << "\n";
  }
}

}  // namespace rac
