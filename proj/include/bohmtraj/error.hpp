#pragma once

#include <stdexcept>
#include <string>

namespace bohmtraj {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at (or numerically at) a pole of the potential or eigenfunction.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// The wavefunction vanishes where a Bohmian field was requested.
class NodeError : public Error {
 public:
  using Error::Error;
};

/// Plain evaluation would overflow; a log-scaled path exists.
class ScaledEvaluationError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_estimate,
                   double error_estimate)
      : Error(what), partial_(partial_estimate), error_(error_estimate) {}

  double partial_estimate() const { return partial_; }
  double error_estimate() const { return error_; }

 private:
  double partial_;
  double error_;
};

/// Root search interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

}  // namespace bohmtraj
