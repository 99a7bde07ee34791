#include "rac/activation.hpp"

#include <cmath>

#include "rac/errors.hpp"

namespace rac {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double activation_eval(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::Swish:
      return x * sigmoid(x);
    case ActivationKind::Sigmoid:
      return sigmoid(x);
    case ActivationKind::Identity:
      return x;
  }
  throw Error("unknown activation kind");
}

double activation_deriv(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::Swish: {
      const double s = sigmoid(x);
      return s + x * s * (1.0 - s);
    }
    case ActivationKind::Sigmoid: {
      const double s = sigmoid(x);
      return s * (1.0 - s);
    }
    case ActivationKind::Identity:
      return 1.0;
  }
  throw Error("unknown activation kind");
}

const char* activation_name(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Tanh:
      return "tanh";
    case ActivationKind::Swish:
      return "swish";
    case ActivationKind::Sigmoid:
      return "sigmoid";
    case ActivationKind::Identity:
      return "identity";
  }
  return "unknown";
}

ActivationKind activation_from_name(const std::string& name) {
  if (name == "tanh") return ActivationKind::Tanh;
  if (name == "swish") return ActivationKind::Swish;
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "identity") return ActivationKind::Identity;
  throw ConfigError("unknown activation '" + name + "' (expected tanh, swish, sigmoid or identity)");
}

}  // namespace rac
