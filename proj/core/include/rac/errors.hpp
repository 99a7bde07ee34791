#pragma once

#include <stdexcept>
#include <string>

namespace rac {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible vector/matrix shapes or an architecture that violates the
// residual-compatibility rules.
struct DimensionError : Error {
  using Error::Error;
};

// Control effectiveness matrix too ill-conditioned to invert.
struct SingularityError : Error {
  using Error::Error;
};

// A runtime contract was broken (parameter estimate left its ball, Gamma not
// positive definite, ...).
struct InvariantError : Error {
  using Error::Error;
};

// A layer cache was paired with parameters or an input it was not built from.
struct CacheMismatchError : Error {
  using Error::Error;
};

// Configuration file syntax or schema violation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rac
