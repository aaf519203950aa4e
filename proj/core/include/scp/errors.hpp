#pragma once

#include <stdexcept>
#include <string>

namespace scp {

/// Malformed configuration, parameters outside their domain, bad literals.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A checked model invariant failed at runtime (e.g. a coupled pair left S).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scp
