#pragma once

#include <stdexcept>
#include <string>

namespace anderson {

/// E sits (numerically) on a Dirichlet eigenvalue of the finite interval;
/// the m-function has a pole there and the caller must move E.
struct DegenerateEnergyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fewer than three tail points were bounded away from 0 and 1, so a decay
/// rate cannot be fitted.
struct InsufficientTailError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Config rejected: carries a field path plus a human-readable reason.
struct ConfigError : std::runtime_error {
  ConfigError(std::string path, const std::string& reason)
      : std::runtime_error(path.empty() ? reason : path + ": " + reason),
        field_path(std::move(path)) {}
  std::string field_path;
};

}  // namespace anderson
