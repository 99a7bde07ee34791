#pragma once

#include <functional>

#include "rac/network.hpp"

namespace rac {

// Second-order plant q_ddot = f(q, q_dot) + g(q, q_dot, t) u + omega(t).
// f and omega are black boxes: the simulated physics evaluates them, the
// controller never sees them. g is the known control effectiveness matrix and
// must keep full row rank on the simulated domain.
struct PlantModel {
  int n = 2;
  int m = 2;
  std::function<Vector(const Vector&, const Vector&)> f;
  std::function<Matrix(const Vector&, const Vector&, double)> g;
  std::function<Vector(double)> omega;
  double omega_bar = 0.0;  // ||omega(t)|| <= omega_bar for all t
};

// Autonomous second-order reference q_d_ddot = f_d(q_d, q_d_dot) with known
// trajectory bounds.
struct ReferenceModel {
  int n = 2;
  std::function<Vector(const Vector&, const Vector&)> f_d;
  Vector q_d0;
  Vector q_d_dot0;
  double q_bar_d = 0.0;
  double q_dot_bar_d = 0.0;
};

Vector plant_accel(const PlantModel& model, const Vector& q, const Vector& q_dot,
                   const Vector& u, double t);

Vector reference_accel(const ReferenceModel& model, const Vector& q_d, const Vector& q_d_dot);

namespace stock {

// f = -c1 * (q_dot .* |q_dot|) - c2 * sin(q), elementwise; g = I. With
// wide_g (n = 2 only) g becomes the 2x3 matrix [[1,0,0.2],[0,1,0.2]] to
// exercise the pseudoinverse. No disturbance until one is attached.
PlantModel drag_plant(int n = 2, double c1 = 0.2, double c2 = 1.0, bool wide_g = false);

// f = 0, g = I, no disturbance.
PlantModel zero_plant(int n = 2);

// Two uncoupled oscillators at angular rates w and 2w, w = 2*pi/period,
// started so the position traces a 1:2 figure-eight of the given extents
// (width x height covers [-width/2, width/2] x [-height/2, height/2]).
ReferenceModel lissajous_reference(double width = 15.0, double height = 5.0,
                                   double period = 60.0);

// Stationary reference at the origin.
ReferenceModel zero_reference(int n = 2);

// omega(t) = omega_bar * (sin 2t, cos 3t) / sqrt(2); norm <= omega_bar.
std::function<Vector(double)> sinusoid_disturbance(double omega_bar);

}  // namespace stock

}  // namespace rac
