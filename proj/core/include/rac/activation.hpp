#pragma once

#include <string>

namespace rac {

// Smooth scalar activations. All of them are C-infinity on R; `Identity` is
// kept for collapse-to-linear tests only.
enum class ActivationKind { Tanh, Swish, Sigmoid, Identity };

double activation_eval(ActivationKind kind, double x);

// Exact analytic derivative of activation_eval.
double activation_deriv(ActivationKind kind, double x);

const char* activation_name(ActivationKind kind);
ActivationKind activation_from_name(const std::string& name);

}  // namespace rac
