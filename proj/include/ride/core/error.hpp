#pragma once

#include <stdexcept>
#include <string>

namespace ride {

// Bad task/config parameters supplied by the user.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Broken caller contract (shape mismatch, zero behavior probability, ...).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Non-finite values where finite ones are required (NaN gradients, losses).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ride

#define RIDE_REQUIRE(cond, msg)                      \
  do {                                               \
    if (!(cond)) throw ::ride::ContractViolation(msg); \
  } while (0)
