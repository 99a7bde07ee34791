#pragma once

#include <optional>
#include <string>

#include "rac/network.hpp"

namespace rac {

struct Gains {
  double k1 = 1.0;  // > 0
  double k2 = 1.0;  // > 0
  double k3 = 0.0;  // >= 0; zero only for ablation runs

  void validate() const;
};

enum class ControllerKind { PD, SNN, DNN, ResNet };

const char* controller_kind_name(ControllerKind kind);
ControllerKind controller_kind_from_name(const std::string& name);

// e = q_d - q.
Vector tracking_error(const Vector& q_d, const Vector& q);

// r = e_dot + k1 * e.
Vector filtered_error(const Vector& e_dot, const Vector& e, double k1);

// kappa = [q; q_dot; q_d; q_d_dot].
Vector assemble_regressor(const Vector& q, const Vector& q_dot, const Vector& q_d,
                          const Vector& q_d_dot);

// Right Moore-Penrose pseudoinverse g^T (g g^T)^{-1} for a full-row-rank
// n x m matrix, n <= m. A condition number of g g^T above 1e12 raises
// SingularityError.
Matrix pseudoinverse(const Matrix& g);

// u = g^+ ((1 - k1^2) e + (k1 + k2) r + psi_hat). The PD baseline passes
// psi_hat = 0.
Vector control_input(const Vector& e, const Vector& r, const Vector& psi_hat, const Matrix& g,
                     const Gains& gains);

}  // namespace rac
