#pragma once

#include <stdexcept>
#include <string>

namespace cgas {

/// Argument outside the mathematical domain of an operation (e.g. g at 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two particles occupy the same position; the energy is infinite there.
class CollisionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for numeric failures that must never be reported as a result.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class QuadratureError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class SingularMatrixError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

}  // namespace cgas
