#pragma once

#include <stdexcept>
#include <string>

namespace qcm {

// Base for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration, malformed input data, contract misuse. CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Numerical failure (non-evaluable estimator, singular solve). CLI exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

// Closed-form moment energy: negative discriminant (complex root).
struct DiscriminantError : NumericalError {
  using NumericalError::NumericalError;
};

// Closed-form moment energy: vanishing denominator.
struct SingularError : NumericalError {
  using NumericalError::NumericalError;
};

// Filesystem / stream failure. CLI exit code 4.
struct IoError : Error {
  using Error::Error;
};

}  // namespace qcm
