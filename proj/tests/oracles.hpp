// Independent reference implementations used as test oracles. Straight-line
// code on purpose: plain loops, no shared paths with the library internals.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "rac/network.hpp"

namespace oracles {

using rac::ActivationKind;
using rac::BlockSpec;
using rac::Matrix;
using rac::NetworkSpec;
using rac::ParamVector;
using rac::Vector;

inline double act(ActivationKind k, double x) {
  switch (k) {
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::Swish:
      return x / (1.0 + std::exp(-x));
    case ActivationKind::Sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::Identity:
      return x;
  }
  return x;
}

// One block of the recursion: v is the augmented input; linear map, then
// elementwise activation plus appended 1, repeated over the layers.
inline std::vector<double> block(const BlockSpec& spec, const std::vector<Matrix>& weights,
                                 std::vector<double> v) {
  std::vector<double> lin;
  for (int j = 0; j <= spec.depth(); ++j) {
    const Matrix& w = weights[static_cast<size_t>(j)];
    lin.assign(static_cast<size_t>(w.cols()), 0.0);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        lin[static_cast<size_t>(c)] += w(r, c) * v[static_cast<size_t>(r)];
    if (j == spec.depth()) break;
    std::vector<double> next(lin.size() + 1);
    for (size_t l = 0; l < lin.size(); ++l)
      next[l] = act(spec.layer_activation(j + 1), lin[l]);
    next[lin.size()] = 1.0;
    v = std::move(next);
  }
  return lin;
}

inline Vector resnet(const NetworkSpec& spec, const std::vector<rac::BlockWeights>& weights,
                     const Vector& x) {
  std::vector<double> aug(static_cast<size_t>(x.size()) + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i) aug[static_cast<size_t>(i)] = x[i];
  aug.back() = 1.0;
  std::vector<double> kappa = block(spec.blocks[0], weights[0], aug);
  for (size_t i = 1; i < spec.blocks.size(); ++i) {
    std::vector<double> psi(kappa.size() + 1);
    for (size_t l = 0; l < kappa.size(); ++l) psi[l] = act(spec.shortcut_activation, kappa[l]);
    psi[kappa.size()] = 1.0;
    const std::vector<double> inc = block(spec.blocks[i], weights[i], psi);
    for (size_t l = 0; l < kappa.size(); ++l) kappa[l] += inc[l];
  }
  Vector out(static_cast<Eigen::Index>(kappa.size()));
  for (size_t l = 0; l < kappa.size(); ++l) out[static_cast<Eigen::Index>(l)] = kappa[l];
  return out;
}

// Central finite differences of the forward pass with respect to theta.
inline Matrix fd_jacobian(const NetworkSpec& spec, const ParamVector& pv, const Vector& x,
                          double h = 1e-6) {
  Matrix jac(spec.output_dim, pv.theta.size());
  ParamVector work = pv;
  for (Eigen::Index k = 0; k < pv.theta.size(); ++k) {
    work.theta[k] = pv.theta[k] + h;
    const Vector hi = rac::resnet_forward(spec, work, x);
    work.theta[k] = pv.theta[k] - h;
    const Vector lo = rac::resnet_forward(spec, work, x);
    work.theta[k] = pv.theta[k];
    jac.col(k) = (hi - lo) / (2.0 * h);
  }
  return jac;
}

inline double max_relative_error(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double err = std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j)));
      worst = std::max(worst, err);
    }
  return worst;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index size, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace oracles
