#pragma once

#include <stdexcept>

namespace ringsim {

// Invalid or inconsistent configuration. The message names the failing field.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem or stream failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Calibration timestamps do not bracket the requested evaluation time.
struct BracketError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace ringsim
