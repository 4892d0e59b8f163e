#pragma once

#include <stdexcept>

namespace owisac {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// Constraint set admits no distribution (peak below the harmonic-mean floor).
struct InfeasibleConstraint : Error {
  using Error::Error;
};

/// Iterative solver failed to bracket or converge.
struct NonConvergence : Error {
  using Error::Error;
};

/// Beat frequency outside the complex-baseband Nyquist interval.
struct AliasError : Error {
  using Error::Error;
};

/// Estimation window crosses a chirp ramp boundary.
struct WindowError : Error {
  using Error::Error;
};

}  // namespace owisac
