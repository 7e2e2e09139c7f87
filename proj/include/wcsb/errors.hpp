#pragma once

#include <stdexcept>
#include <string>

namespace wcsb {

// Bad or missing configuration values (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver or extrapolation that did not meet its contract (CLI exit code 3).
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wcsb
