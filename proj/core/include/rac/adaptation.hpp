#pragma once

#include <utility>

#include "rac/network.hpp"

namespace rac {

// Euclidean ball of radius `radius` with a smoothing band of width
// `boundary_layer` just inside the boundary. The band width is absolute and
// must stay below the radius.
struct SearchSpace {
  double radius = 1.0;
  double boundary_layer = 0.05;

  static SearchSpace ball(double radius, double layer_fraction = 0.05);
  void validate() const;
};

// Positive-definite learning rate matrix, diagonal unless a full matrix is
// supplied.
class LearningRate {
 public:
  LearningRate() = default;
  static LearningRate uniform(double c, int dim);
  static LearningRate diagonal(Vector d);
  static LearningRate full(Matrix m);

  int dim() const;
  bool is_diagonal() const { return diagonal_.size() > 0; }
  Vector apply(const Vector& v) const;

  // (min, max) eigenvalues of Gamma^{-1}; throws InvariantError when Gamma is
  // not positive definite.
  std::pair<double, double> inverse_eigen_range() const;

 private:
  Vector diagonal_;
  Matrix full_;
};

// Smooth radial projection of the update direction tau at the estimate
// theta_hat. Outside the boundary layer, or when tau points inward, tau is
// returned unchanged; inside the layer the outward radial component is scaled
// down continuously and vanishes at the boundary. theta_hat more than
// kStateTolerance (relative) outside the ball raises InvariantError. The
// slack absorbs Runge-Kutta stage extrapolations, which leave the ball by
// the chord term (|theta_dot| dt)^2 / 2R even when the flow itself does not;
// the per-step drift rule in the simulator enforces the tight 1e-9 bound on
// actual states.
inline constexpr double kStateTolerance = 1e-3;

Vector smooth_projection(const SearchSpace& space, const Vector& theta_hat, const Vector& tau);

// proj(Gamma * (jac^T r - k3 * theta_hat)).
Vector update_law(const Matrix& jac, const Vector& r, const Vector& theta_hat, double k3,
                  const LearningRate& gamma, const SearchSpace& space);

}  // namespace rac
