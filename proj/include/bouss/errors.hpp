#ifndef BOUSS_ERRORS_HPP
#define BOUSS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bouss {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A field contains non-finite entries or has inconsistent shape.
class InvalidFieldError : public Error {
public:
  using Error::Error;
};

/// A scalar parameter violates its admissible range (beta <= 0, M below floor, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Two objects that must share a mesh/grid do not.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Zero pivot met while factorizing a matrix.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

/// Kernel evaluated outside its domain or on the diagonal.
class DomainError : public Error {
public:
  using Error::Error;
};

/// An implicit time step failed to converge. Carries the failing step and the
/// last Newton residual; the usual cure is refining dt/dx.
class StepFailureError : public Error {
public:
  StepFailureError(const std::string& what, int step, double residual)
      : Error(what), step_(step), residual_(residual) {}

  int step() const { return step_; }
  double residual() const { return residual_; }

private:
  int step_;
  double residual_;
};

/// Explicit time integration blew up (infinity-norm beyond threshold).
class InstabilityError : public Error {
public:
  using Error::Error;
};

/// Objective or gradient came back non-finite during minimization.
class EvaluationError : public Error {
public:
  using Error::Error;
};

/// Report files could not be written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace bouss

#endif  // BOUSS_ERRORS_HPP
