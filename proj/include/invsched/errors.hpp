#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace invsched {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The simplex kernel exceeded its iteration cap or produced an inconsistent answer.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// An operation that needs a nonempty set was given an empty one.
class EmptySet : public Error {
 public:
  using Error::Error;
};

/// A LinearSystem whose constraint sets are empty or unbounded.
class InvalidSystem : public Error {
 public:
  using Error::Error;
};

/// The invariant-set recursion emptied out: no safe operating region exists.
class EmptyInvariant : public Error {
 public:
  using Error::Error;
};

/// The set handed to the safe-time computation is not one-step invariant.
class InvalidInvariant : public Error {
 public:
  using Error::Error;
};

/// A transmission sequence that is empty, negative or not strictly increasing.
class MalformedSequence : public Error {
 public:
  using Error::Error;
};

/// A well-formed sequence that violates the gap bound for its alpha.
class InfeasibleSchedule : public Error {
 public:
  using Error::Error;
};

/// No admissible input sequence exists for the requested horizon.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// A simulated state left the invariant set.
class SafetyViolation : public Error {
 public:
  SafetyViolation(long step, Eigen::VectorXd state, const std::string& what)
      : Error(what), step_(step), state_(std::move(state)) {}

  long step() const noexcept { return step_; }
  const Eigen::VectorXd& state() const noexcept { return state_; }

 private:
  long step_;
  Eigen::VectorXd state_;
};

}  // namespace invsched
