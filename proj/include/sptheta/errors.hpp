#pragma once

#include <stdexcept>
#include <string>

namespace sptheta {

/// Input violates a type invariant (non-Hermitian matrix, row not summing to one, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A real parameter lies outside the domain of an operation (alpha outside (0,1), r < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A tensor power, graph product or search exceeds the hard size caps.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An iterative solver stopped before its certificate reached the tolerance.
/// Carries the best bounds seen so callers can still report them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best_value_(best_value), gap_(gap) {}

  double best_value() const noexcept { return best_value_; }
  double gap() const noexcept { return gap_; }

 private:
  double best_value_;
  double gap_;
};

/// A mathematical identity that must hold between independently computed
/// quantities was violated; signals a solver or representation bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sptheta
