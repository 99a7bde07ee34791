#include "rac/control.hpp"

#include <Eigen/Eigenvalues>

namespace rac {

namespace {
constexpr double kConditionLimit = 1e12;
}

void Gains::validate() const {
  if (!(k1 > 0.0)) throw InvariantError("k1 must be positive");
  if (!(k2 > 0.0)) throw InvariantError("k2 must be positive");
  if (k3 < 0.0) throw InvariantError("k3 must be nonnegative");
}

const char* controller_kind_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::PD:
      return "pd";
    case ControllerKind::SNN:
      return "snn";
    case ControllerKind::DNN:
      return "dnn";
    case ControllerKind::ResNet:
      return "resnet";
  }
  return "unknown";
}

ControllerKind controller_kind_from_name(const std::string& name) {
  if (name == "pd") return ControllerKind::PD;
  if (name == "snn") return ControllerKind::SNN;
  if (name == "dnn") return ControllerKind::DNN;
  if (name == "resnet") return ControllerKind::ResNet;
  throw ConfigError("unknown controller kind '" + name + "' (expected pd, snn, dnn or resnet)");
}

Vector tracking_error(const Vector& q_d, const Vector& q) {
  if (q_d.size() != q.size()) throw DimensionError("tracking error operands differ in length");
  return q_d - q;
}

Vector filtered_error(const Vector& e_dot, const Vector& e, double k1) {
  if (e_dot.size() != e.size()) throw DimensionError("filtered error operands differ in length");
  return e_dot + k1 * e;
}

Vector assemble_regressor(const Vector& q, const Vector& q_dot, const Vector& q_d,
                          const Vector& q_d_dot) {
  const Eigen::Index n = q.size();
  if (q_dot.size() != n || q_d.size() != n || q_d_dot.size() != n)
    throw DimensionError("regressor components differ in length");
  Vector kappa(4 * n);
  kappa << q, q_dot, q_d, q_d_dot;
  return kappa;
}

Matrix pseudoinverse(const Matrix& g) {
  if (g.rows() > g.cols())
    throw SingularityError("pseudoinverse expects a wide or square matrix (n <= m)");
  const Matrix gram = g * g.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kConditionLimit)
    throw SingularityError("control effectiveness matrix is rank deficient or too "
                           "ill-conditioned (cond(g g^T) > 1e12)");
  // g^+ = g^T (g g^T)^{-1}, computed by solving against the Gram matrix.
  return gram.llt().solve(g).transpose();
}

Vector control_input(const Vector& e, const Vector& r, const Vector& psi_hat, const Matrix& g,
                     const Gains& gains) {
  gains.validate();
  const Eigen::Index n = e.size();
  if (r.size() != n || psi_hat.size() != n || g.rows() != n)
    throw DimensionError("control input operands differ in length");
  const Vector desired =
      (1.0 - gains.k1 * gains.k1) * e + (gains.k1 + gains.k2) * r + psi_hat;
  return pseudoinverse(g) * desired;
}

}  // namespace rac
