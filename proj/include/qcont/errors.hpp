#pragma once

#include <stdexcept>
#include <string>

namespace qcont {

/// Argument outside the mathematical domain of an operation (log of a
/// negative eigenvalue, energy outside the attainable interval, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent input data, e.g. a decomposition that does not sum to the
/// state it claims to decompose.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& what, double residual)
      : std::invalid_argument(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Iterative method hit its cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Operation called on an input that violates its stated precondition, e.g.
/// a state above the energy constraint. `measured` is the offending value.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(const std::string& what, double measured)
      : std::invalid_argument(what + " (measured " + std::to_string(measured) + ")"),
        measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

/// Malformed campaign configuration; the message carries line and field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction produced an object violating its own invariants. Always a
/// bug in this library, never a property of the input.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qcont
