#pragma once

#include <stdexcept>

namespace contactlab {

// malformed user input: group strings, kernel specs, config files
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// an enumeration or simulation hit its configured resource cap
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerically inconsistent inputs, e.g. probabilities that cannot be repaired
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace contactlab
