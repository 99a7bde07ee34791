#include "rac/adaptation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rac {

SearchSpace SearchSpace::ball(double radius, double layer_fraction) {
  SearchSpace s;
  s.radius = radius;
  s.boundary_layer = layer_fraction * radius;
  s.validate();
  return s;
}

void SearchSpace::validate() const {
  if (!(radius > 0.0)) throw InvariantError("search space radius must be positive");
  if (!(boundary_layer > 0.0) || boundary_layer >= radius)
    throw InvariantError("boundary layer must lie in (0, radius)");
}

LearningRate LearningRate::uniform(double c, int dim) {
  return diagonal(Vector::Constant(dim, c));
}

LearningRate LearningRate::diagonal(Vector d) {
  for (Eigen::Index k = 0; k < d.size(); ++k)
    if (!(d[k] > 0.0)) throw InvariantError("learning rate diagonal must be positive");
  LearningRate lr;
  lr.diagonal_ = std::move(d);
  return lr;
}

LearningRate LearningRate::full(Matrix m) {
  if (m.rows() != m.cols()) throw InvariantError("learning rate matrix must be square");
  if (!m.isApprox(m.transpose(), 1e-12))
    throw InvariantError("learning rate matrix must be symmetric");
  LearningRate lr;
  lr.full_ = std::move(m);
  lr.inverse_eigen_range();  // rejects non-positive-definite matrices up front
  return lr;
}

int LearningRate::dim() const {
  return is_diagonal() ? static_cast<int>(diagonal_.size()) : static_cast<int>(full_.rows());
}

Vector LearningRate::apply(const Vector& v) const {
  if (v.size() != dim()) throw DimensionError("learning rate dimension mismatch");
  if (is_diagonal()) return diagonal_.cwiseProduct(v);
  return full_ * v;
}

std::pair<double, double> LearningRate::inverse_eigen_range() const {
  double lo = 0.0, hi = 0.0;
  if (is_diagonal()) {
    lo = diagonal_.minCoeff();
    hi = diagonal_.maxCoeff();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(full_, Eigen::EigenvaluesOnly);
    lo = solver.eigenvalues().minCoeff();
    hi = solver.eigenvalues().maxCoeff();
  }
  if (!(lo > 0.0)) throw InvariantError("learning rate matrix is not positive definite");
  return {1.0 / hi, 1.0 / lo};
}

Vector smooth_projection(const SearchSpace& space, const Vector& theta_hat, const Vector& tau) {
  space.validate();
  if (theta_hat.size() != tau.size())
    throw DimensionError("projection operands must have equal length");
  const double radius = space.radius;
  const double inner = radius - space.boundary_layer;
  const double norm2 = theta_hat.squaredNorm();
  const double limit = radius * (1.0 + kStateTolerance);
  if (norm2 > limit * limit)
    throw InvariantError("parameter estimate left the search space: ||theta|| = " +
                         std::to_string(std::sqrt(norm2)) + " > " + std::to_string(radius));
  if (norm2 <= inner * inner) return tau;
  const double radial = theta_hat.dot(tau);
  if (radial <= 0.0) return tau;
  // Squared band coordinate: C1 at the band entry, 1 at the boundary, and
  // above 1 for the slightly-outside integrator stage states, where the
  // excess turns the removed radial component into a restoring correction.
  const double q = (norm2 - inner * inner) / (radius * radius - inner * inner);
  return tau - (q * q * radial / norm2) * theta_hat;
}

Vector update_law(const Matrix& jac, const Vector& r, const Vector& theta_hat, double k3,
                  const LearningRate& gamma, const SearchSpace& space) {
  if (jac.rows() != r.size())
    throw DimensionError("Jacobian rows must match the filtered error length");
  if (jac.cols() != theta_hat.size())
    throw DimensionError("Jacobian columns must match the parameter count");
  const Vector direction = gamma.apply(jac.transpose() * r - k3 * theta_hat);
  return smooth_projection(space, theta_hat, direction);
}

}  // namespace rac
