#pragma once

#include <stdexcept>

namespace tourcount {

// A request exceeds a configured or structural resource limit (for example
// exact enumeration beyond the feasible board size).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration (mismatched batches, bad flag values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tourcount
