#pragma once

#include <string>
#include <vector>

#include "anderson1d/config.hpp"

namespace anderson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationError = 1;
inline constexpr int kExitDegenerate = 2;

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> files;     // everything written, manifest last
  std::vector<std::string> warnings;  // degenerate-result diagnostics
};

const std::vector<std::string>& subcommands();

/// Executes one subcommand against a validated config, writing CSV outputs
/// and a run manifest under the given path prefix. CSV bytes are a pure
/// function of (subcommand, config); the manifest additionally records wall
/// time and environment and is therefore excluded from that guarantee.
RunResult run_subcommand(const std::string& name,
                         const ExperimentConfig& config,
                         const std::string& out_prefix);

}  // namespace anderson::cli
