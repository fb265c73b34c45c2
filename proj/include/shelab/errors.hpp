#pragma once

#include <stdexcept>
#include <string>

namespace shelab {

/// Argument outside the mathematical domain of an operation (t <= 0, x outside [0,1], size mismatch).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Envelope constants are only derived for the L log L drift family.
class UnsupportedEnvelope : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite estimate or failed numerical invariant. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shelab
