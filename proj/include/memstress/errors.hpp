#pragma once

#include <stdexcept>
#include <string>

namespace memstress {

// Invalid configuration: bad parameters, malformed input, incompatible
// grid/surface combinations. Recoverable by fixing the input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The embedding stopped being an immersion: degenerate or non-finite
// tangent plane at some node.
struct ImmersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A descent step could not make progress: the step size underflowed
// while searching for an energy-decreasing update.
struct StagnationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace memstress
