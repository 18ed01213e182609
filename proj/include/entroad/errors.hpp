#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entroad {

/// A precondition on an argument does not hold (dimension mismatch, point
/// outside a space, lambda outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Rejection sampling ran out of retries.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The solver hit its iteration budget before meeting tolerance. Carries the
/// best objective value and state seen so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value, std::vector<double> best_state)
      : std::runtime_error(what), best_value_(best_value), best_state_(std::move(best_state)) {}

  double best_value() const { return best_value_; }
  const std::vector<double>& best_state() const { return best_state_; }

 private:
  double best_value_;
  std::vector<double> best_state_;
};

/// A document failed to load or type-check.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entroad
