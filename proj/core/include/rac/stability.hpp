#pragma once

#include <utility>

#include "rac/adaptation.hpp"
#include "rac/control.hpp"

namespace rac {

// Constants of the convergence analysis. lambda1/lambda_phi bound the
// Lyapunov weighting matrix blkdiag(I, Gamma^{-1}); delta collects the
// disturbance, reconstruction-error and leakage contributions; k_min is the
// effective decay gain. q_bound_sum = q_bar_d + q_dot_bar_d of the reference.
struct StabilityConstants {
  double lambda1 = 1.0;
  double lambda_phi = 1.0;
  double delta = 0.0;
  double k_min = 0.0;
  double lambda_V = 0.1;  // user-chosen convergence-rate parameter
  double ultimate_radius = 0.0;
  double omega_bar = 0.0;
  double eps_bar = 0.0;
  double theta_bar = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double q_bound_sum = 0.0;
};

// rho0(s) = a2 s^2 + a1 s + a0 with nonnegative coefficients, bounding the
// Taylor remainder of the network in the parameter estimate. The
// coefficients come from the user; they are inputs, not derived quantities.
struct RemainderPolynomial {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double theta_bar = 0.0;

  void validate() const;
  double rho0(double s) const { return (a2 * s + a1) * s + a0; }
  bool degenerate() const { return a2 == 0.0 && a1 == 0.0; }
};

// lambda1 = min{1, lambda_min(Gamma^{-1})}, lambda_phi = max{1, lambda_max(Gamma^{-1})}.
std::pair<double, double> rayleigh_bounds(const LearningRate& gamma);

// delta = 3 (omega_bar + eps_bar)^2 / (4 k2) + k3 theta_bar^2 / 2.
double compute_delta(double omega_bar, double eps_bar, double k2, double k3, double theta_bar);

// k_min = min{k1, k2/3, k3/2}.
double compute_kmin(const Gains& gains);

double compute_ultimate_radius(double lambda1, double lambda_phi, double delta, double lambda_V);

StabilityConstants compute_constants(const Gains& gains, const LearningRate& gamma,
                                     double omega_bar, double eps_bar, double theta_bar,
                                     double lambda_V, double q_bound_sum);

// rho(z) = 3 theta_bar^2 * rho0((k1 + 2) z + 2 q_bound_sum)^2.
double rho_of_z(const StabilityConstants& c, const RemainderPolynomial& rho, double z_norm);

// Solves rho(s) - rho(0) = y by bisection; rho_bar is strictly increasing
// whenever the polynomial is non-degenerate.
double rho_bar_inverse(const StabilityConstants& c, const RemainderPolynomial& rho, double y);

struct GainConditionResult {
  bool satisfied = false;
  double margin = 0.0;  // k_min - lambda_V - rho(ultimate_radius) / k2
};

GainConditionResult check_gain_condition(const StabilityConstants& c,
                                         const RemainderPolynomial& rho);

enum class SetFeasibility { Feasible, Unconstrained, Infeasible };

const char* set_feasibility_name(SetFeasibility f);

// Radii of the constraint region, the initial-condition set and the regressor
// domain. Unconstrained covers the degenerate constant-rho0 case (radii
// infinite); Infeasible is reported, never thrown.
struct SetRadii {
  SetFeasibility feasibility = SetFeasibility::Infeasible;
  double d_radius = 0.0;
  double s_radius = 0.0;
  double omega_radius = 0.0;
};

SetRadii set_radii(const StabilityConstants& c, const RemainderPolynomial& rho);

// sqrt((lphi/l1) z0^2 exp(-2 lV dt / lphi) + (lphi delta)/(l1 lV) (1 - exp(...))).
double convergence_envelope(const StabilityConstants& c, double z0_norm, double t_minus_t0);

}  // namespace rac
