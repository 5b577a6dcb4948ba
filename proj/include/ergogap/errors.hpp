#pragma once

#include <stdexcept>
#include <string>

namespace ergogap {

// Argument outside the mathematical domain of an operation (negative
// frequency, wrong dimension, T <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input fails a structural invariant (non-Hermitian, non-passive, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called with the wrong setup tag or otherwise misused.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Inconsistent or unsafe run configuration (mismatched shared params,
// integrator stability guard, bad config file).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ergogap
