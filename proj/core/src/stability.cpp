#include "rac/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rac {

void RemainderPolynomial::validate() const {
  if (a2 < 0.0 || a1 < 0.0 || a0 < 0.0)
    throw InvariantError("remainder polynomial coefficients must be nonnegative");
}

std::pair<double, double> rayleigh_bounds(const LearningRate& gamma) {
  const auto [inv_min, inv_max] = gamma.inverse_eigen_range();
  return {std::min(1.0, inv_min), std::max(1.0, inv_max)};
}

double compute_delta(double omega_bar, double eps_bar, double k2, double k3, double theta_bar) {
  if (!(k2 > 0.0)) throw InvariantError("delta requires k2 > 0");
  const double s = omega_bar + eps_bar;
  return 3.0 * s * s / (4.0 * k2) + k3 * theta_bar * theta_bar / 2.0;
}

double compute_kmin(const Gains& gains) {
  return std::min({gains.k1, gains.k2 / 3.0, gains.k3 / 2.0});
}

double compute_ultimate_radius(double lambda1, double lambda_phi, double delta, double lambda_V) {
  return std::sqrt(lambda_phi * delta / (lambda1 * lambda_V));
}

StabilityConstants compute_constants(const Gains& gains, const LearningRate& gamma,
                                     double omega_bar, double eps_bar, double theta_bar,
                                     double lambda_V, double q_bound_sum) {
  if (!(lambda_V > 0.0)) throw InvariantError("lambda_V must be positive");
  StabilityConstants c;
  std::tie(c.lambda1, c.lambda_phi) = rayleigh_bounds(gamma);
  c.delta = compute_delta(omega_bar, eps_bar, gains.k2, gains.k3, theta_bar);
  c.k_min = compute_kmin(gains);
  c.lambda_V = lambda_V;
  c.ultimate_radius = compute_ultimate_radius(c.lambda1, c.lambda_phi, c.delta, lambda_V);
  c.omega_bar = omega_bar;
  c.eps_bar = eps_bar;
  c.theta_bar = theta_bar;
  c.k1 = gains.k1;
  c.k2 = gains.k2;
  c.q_bound_sum = q_bound_sum;
  return c;
}

double rho_of_z(const StabilityConstants& c, const RemainderPolynomial& rho, double z_norm) {
  rho.validate();
  const double s = (c.k1 + 2.0) * z_norm + 2.0 * c.q_bound_sum;
  const double r0 = rho.rho0(s);
  return 3.0 * rho.theta_bar * rho.theta_bar * r0 * r0;
}

double rho_bar_inverse(const StabilityConstants& c, const RemainderPolynomial& rho, double y) {
  rho.validate();
  if (rho.degenerate())
    throw InvariantError("rho_bar is identically zero for a constant rho0; no inverse exists");
  if (y < 0.0) throw InvariantError("rho_bar_inverse needs a nonnegative argument");
  if (y == 0.0) return 0.0;
  const double rho_at_0 = rho_of_z(c, rho, 0.0);
  auto rho_bar = [&](double s) { return rho_of_z(c, rho, s) - rho_at_0; };
  double lo = 0.0, hi = 1e6;
  if (rho_bar(hi) < y) return hi;  // clamp; far beyond any state of interest
  // rho_bar is strictly increasing, so plain bisection converges.
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (rho_bar(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GainConditionResult check_gain_condition(const StabilityConstants& c,
                                         const RemainderPolynomial& rho) {
  if (!(c.lambda_V > 0.0)) throw InvariantError("lambda_V must be positive");
  GainConditionResult result;
  result.margin = c.k_min - c.lambda_V - rho_of_z(c, rho, c.ultimate_radius) / c.k2;
  result.satisfied = result.margin > 0.0;
  return result;
}

const char* set_feasibility_name(SetFeasibility f) {
  switch (f) {
    case SetFeasibility::Feasible:
      return "feasible";
    case SetFeasibility::Unconstrained:
      return "unconstrained";
    case SetFeasibility::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

SetRadii set_radii(const StabilityConstants& c, const RemainderPolynomial& rho) {
  rho.validate();
  SetRadii radii;
  const double arg = c.k2 * (c.k_min - c.lambda_V) - rho_of_z(c, rho, 0.0);
  if (rho.degenerate()) {
    // rho_bar vanishes identically: the constraint region is the whole space
    // as long as the argument is not negative.
    if (arg < 0.0) return radii;
    radii.feasibility = SetFeasibility::Unconstrained;
    radii.d_radius = std::numeric_limits<double>::infinity();
    radii.s_radius = std::numeric_limits<double>::infinity();
    radii.omega_radius = std::numeric_limits<double>::infinity();
    return radii;
  }
  if (arg < 0.0) return radii;
  radii.d_radius = rho_bar_inverse(c, rho, arg);
  radii.s_radius =
      std::sqrt(c.lambda1 / c.lambda_phi) * radii.d_radius - std::sqrt(c.delta / c.lambda_V);
  radii.omega_radius = 2.0 * c.q_bound_sum + (c.k1 + 2.0) * radii.d_radius;
  radii.feasibility =
      radii.s_radius > 0.0 ? SetFeasibility::Feasible : SetFeasibility::Infeasible;
  return radii;
}

double convergence_envelope(const StabilityConstants& c, double z0_norm, double t_minus_t0) {
  const double decay = std::exp(-2.0 * c.lambda_V * t_minus_t0 / c.lambda_phi);
  const double transient = (c.lambda_phi / c.lambda1) * z0_norm * z0_norm * decay;
  const double floor = (c.lambda_phi * c.delta) / (c.lambda1 * c.lambda_V) * (1.0 - decay);
  return std::sqrt(transient + floor);
}

}  // namespace rac
