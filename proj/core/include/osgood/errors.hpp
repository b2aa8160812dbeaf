#pragma once

#include <stdexcept>
#include <string>

namespace osgood {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid construction or configuration parameter.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Result would leave the representable range (e.g. beyond a modulus cutoff).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integrator step fell below 1e-14: the field is effectively
/// non-smooth at the resolved scale.
class StepUnderflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requires a mean-zero field.
class MeanNonzeroError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace osgood
