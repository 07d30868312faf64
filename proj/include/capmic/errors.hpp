#pragma once

#include <stdexcept>
#include <string>

namespace capmic {

/// Bad input: malformed files, schema violations, invalid designs, out-of-range
/// arguments. CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Physically excluded operating point: bias at or above pull-in, or a load
/// that drives the diaphragm into the backplate. CLI exit code 3.
struct PullInError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No feasible design under the given constraints. CLI exit code 3.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal numeric failure: a bracket without a sign change, a self-check
/// that disagrees beyond tolerance, or a value outside the solver's range.
/// CLI exit code 4.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace capmic
