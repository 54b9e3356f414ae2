#include "anderson1d/lyapunov.hpp"

#include <cmath>
#include <stdexcept>

#include "anderson1d/kernels.hpp"
#include "anderson1d/parallel.hpp"
#include "anderson1d/rng.hpp"
#include "anderson1d/transfer.hpp"

namespace anderson::lyapunov {

namespace {

struct AtomMatrices {
  std::vector<transfer::Mat2> mats;
  kernels::ChainParams params(std::uint64_t steps,
                              const std::vector<double>& cum) const {
    return {mats.data(), cum.data(), mats.size(),
            static_cast<std::uint64_t>(steps)};
  }
};

AtomMatrices atom_matrices(const model::SingleSiteMeasure& mu, double energy) {
  AtomMatrices out;
  out.mats.reserve(mu.num_atoms());
  for (const model::Atom& a : mu.atoms()) {
    out.mats.push_back(transfer::transfer_piece(a.piece, energy));
  }
  return out;
}

}  // namespace

std::vector<double> sample_exponents(const model::SingleSiteMeasure& mu,
                                     double energy, std::int64_t n,
                                     std::int64_t num_samples,
                                     std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");

  const AtomMatrices atoms = atom_matrices(mu, energy);
  const kernels::ChainParams params =
      atoms.params(static_cast<std::uint64_t>(n), mu.cum_probs());
  const kernels::ChainFn run = kernels::active_kernel();

  const std::size_t count = static_cast<std::size_t>(num_samples);
  std::vector<std::uint64_t> keys(count);
  for (std::size_t i = 0; i < count; ++i) {
    keys[i] = rng::derive(seed, static_cast<std::uint64_t>(i));
  }

  std::vector<double> values(count);
  par::parallel_for_ranges(count, [&](std::size_t begin, std::size_t end) {
    run(params, keys.data() + begin, values.data() + begin, end - begin);
  });

  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : values) v *= inv_n;
  return values;
}

LyapunovEstimate estimate_lyapunov(const model::SingleSiteMeasure& mu,
                                   double energy, std::int64_t n,
                                   std::int64_t num_samples,
                                   std::uint64_t seed) {
  const std::vector<double> values =
      sample_exponents(mu, energy, n, num_samples, seed);

  // Sequential reductions in sample order keep the result independent of
  // worker count.
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());

  double std_error = 0.0;
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return {energy, n, num_samples, mean, std_error, seed};
}

std::vector<LyapunovEstimate> sweep_lyapunov(
    const model::SingleSiteMeasure& mu, const std::vector<double>& energies,
    std::int64_t n, std::int64_t num_samples, std::uint64_t seed) {
  if (energies.empty()) throw std::invalid_argument("empty energy grid");
  std::vector<LyapunovEstimate> out;
  out.reserve(energies.size());
  for (std::size_t k = 0; k < energies.size(); ++k) {
    out.push_back(estimate_lyapunov(mu, energies[k], n, num_samples,
                                    rng::derive(seed, k)));
  }
  return out;
}

}  // namespace anderson::lyapunov
