#include "rac/plant.hpp"

#include <cmath>
#include <numbers>

namespace rac {

Vector plant_accel(const PlantModel& model, const Vector& q, const Vector& q_dot,
                   const Vector& u, double t) {
  if (q.size() != model.n || q_dot.size() != model.n)
    throw DimensionError("plant state dimension mismatch");
  if (u.size() != model.m) throw DimensionError("plant input dimension mismatch");
  Vector accel = model.f(q, q_dot);
  accel += model.g(q, q_dot, t) * u;
  if (model.omega) accel += model.omega(t);
  return accel;
}

Vector reference_accel(const ReferenceModel& model, const Vector& q_d, const Vector& q_d_dot) {
  if (q_d.size() != model.n || q_d_dot.size() != model.n)
    throw DimensionError("reference state dimension mismatch");
  return model.f_d(q_d, q_d_dot);
}

namespace stock {

PlantModel drag_plant(int n, double c1, double c2, bool wide_g) {
  PlantModel model;
  model.n = n;
  model.f = [c1, c2](const Vector& q, const Vector& q_dot) {
    Vector out(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i)
      out[i] = -c1 * q_dot[i] * std::abs(q_dot[i]) - c2 * std::sin(q[i]);
    return out;
  };
  if (wide_g) {
    if (n != 2) throw DimensionError("wide effectiveness variant is defined for n = 2");
    model.m = 3;
    Matrix g(2, 3);
    g << 1.0, 0.0, 0.2, 0.0, 1.0, 0.2;
    model.g = [g](const Vector&, const Vector&, double) { return g; };
  } else {
    model.m = n;
    const Matrix identity = Matrix::Identity(n, n);
    model.g = [identity](const Vector&, const Vector&, double) { return identity; };
  }
  return model;
}

PlantModel zero_plant(int n) {
  PlantModel model;
  model.n = n;
  model.m = n;
  model.f = [n](const Vector&, const Vector&) { return Vector::Zero(n); };
  const Matrix identity = Matrix::Identity(n, n);
  model.g = [identity](const Vector&, const Vector&, double) { return identity; };
  return model;
}

ReferenceModel lissajous_reference(double width, double height, double period) {
  if (!(width > 0.0) || !(height > 0.0) || !(period > 0.0))
    throw InvariantError("lissajous reference needs positive extents and period");
  const double w = 2.0 * std::numbers::pi / period;
  const double amp1 = width / 2.0;
  const double amp2 = height / 2.0;
  ReferenceModel model;
  model.n = 2;
  model.f_d = [w](const Vector& q_d, const Vector&) {
    Vector out(2);
    out[0] = -w * w * q_d[0];
    out[1] = -4.0 * w * w * q_d[1];
    return out;
  };
  // q_d = (amp1 sin(wt), amp2 sin(2wt)): start at the crossing point with the
  // matching velocities.
  model.q_d0 = Vector::Zero(2);
  model.q_d_dot0 = Vector(2);
  model.q_d_dot0 << amp1 * w, 2.0 * amp2 * w;
  model.q_bar_d = std::hypot(amp1, amp2);
  model.q_dot_bar_d = w * std::sqrt(amp1 * amp1 + 4.0 * amp2 * amp2);
  return model;
}

ReferenceModel zero_reference(int n) {
  ReferenceModel model;
  model.n = n;
  model.f_d = [n](const Vector&, const Vector&) { return Vector::Zero(n); };
  model.q_d0 = Vector::Zero(n);
  model.q_d_dot0 = Vector::Zero(n);
  model.q_bar_d = 0.0;
  model.q_dot_bar_d = 0.0;
  return model;
}

std::function<Vector(double)> sinusoid_disturbance(double omega_bar) {
  const double scale = omega_bar / std::numbers::sqrt2;
  return [scale](double t) {
    Vector out(2);
    out[0] = scale * std::sin(2.0 * t);
    out[1] = scale * std::cos(3.0 * t);
    return out;
  };
}

}  // namespace stock

}  // namespace rac
