#pragma once

#include <cstdint>
#include <vector>

#include "anderson1d/model.hpp"

namespace anderson::lyapunov {

/// Monte Carlo estimate of the Lyapunov exponent at one energy: the mean of
/// log ||A_n|| / n over num_samples independent words, with the standard
/// error of that mean.
struct LyapunovEstimate {
  double energy;
  std::int64_t n;
  std::int64_t num_samples;
  double mean;
  double std_error;
  std::uint64_t seed;
};

/// Per-sample finite-scale exponents log ||A_n|| / n, in sample order.
/// Sample i uses the stream keyed by rng::derive(seed, i); the result is a
/// pure function of the inputs, independent of worker count and of which
/// chain kernel runs.
std::vector<double> sample_exponents(const model::SingleSiteMeasure& mu,
                                     double energy, std::int64_t n,
                                     std::int64_t num_samples,
                                     std::uint64_t seed);

LyapunovEstimate estimate_lyapunov(const model::SingleSiteMeasure& mu,
                                   double energy, std::int64_t n,
                                   std::int64_t num_samples,
                                   std::uint64_t seed);

/// estimate_lyapunov on each grid energy with decorrelated per-energy seeds
/// (rng::derive(seed, grid index)); output order matches input order. Each
/// row can be reproduced standalone via its recorded seed.
std::vector<LyapunovEstimate> sweep_lyapunov(
    const model::SingleSiteMeasure& mu, const std::vector<double>& energies,
    std::int64_t n, std::int64_t num_samples, std::uint64_t seed);

}  // namespace anderson::lyapunov
