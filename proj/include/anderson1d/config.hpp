#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anderson1d/model.hpp"

namespace anderson::cli {

// Per-subcommand parameter blocks. Every field has a runnable default, so a
// minimal config needs only the model definition (delta, m, atoms).

struct LyapunovParams {
  double e_lo = 0.2;
  double e_hi = 5.0;
  int e_points = 20;
  std::int64_t n = 10000;
  std::int64_t samples = 200;
};

struct LdtParams {
  double epsilon = 0.05;
  std::vector<std::int64_t> n_grid{50, 100, 200, 400, 800};
  std::int64_t samples = 10000;
  std::vector<double> e_grid{0.3, 0.5, 0.8, 1.2, 1.8};
};

struct CertifyParams {
  std::vector<double> e_grid{0.5, 1.5, 2.5, 3.5, 4.5};
  double tol_c = 1e-8;   // relative to ||A||^2 ||B||^2
  double tol_t = 1e-10;  // absolute trace threshold
  int k_max = 8;
};

struct DiscreteSetParams {
  double e_lo = 0.0;
  double e_hi = 10.0;
  int grid_points = 2000;
  double tol = 1e-10;
  std::size_t pair_i = 0;
  std::size_t pair_j = 1;
};

struct NcParams {
  double tol_val = 1e-12;
};

// Probe pieces default to the first two atoms of the model.
struct BorgMarchenkoParams {
  std::optional<std::vector<model::Segment>> piece1;
  std::optional<std::vector<model::Segment>> piece2;
  int n_real = 20;
  int n_imag = 20;
};

struct AtomSpec {
  double prob;
  std::vector<model::Segment> segments;
};

struct ExperimentConfig {
  double delta = 0.0;
  double m = 0.0;
  std::vector<AtomSpec> atoms;
  std::uint64_t seed = 1;
  LyapunovParams lyapunov;
  LdtParams ldt;
  CertifyParams certify;
  DiscreteSetParams discrete_set;
  NcParams nc;
  BorgMarchenkoParams borg_marchenko;
};

/// Parses and validates a JSON config. Strict: unknown keys anywhere are
/// errors (ConfigError with the offending field path). Semantic validation
/// (probability sum, segment lengths/ranges) also throws ConfigError.
ExperimentConfig parse_config(const std::string& text);

/// Serializes a config, defaults applied, as canonical JSON text.
/// parse_config(emit_config(c)) reproduces c exactly.
std::string emit_config(const ExperimentConfig& config);

/// Builds the validated single-site measure from the model block.
model::SingleSiteMeasure make_measure(const ExperimentConfig& config);

}  // namespace anderson::cli
