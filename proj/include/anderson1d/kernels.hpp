#pragma once

#include <cstddef>
#include <cstdint>

#include "anderson1d/mat2.hpp"

namespace anderson::kernels {

/// Inputs shared by one batch of Monte Carlo chains at a fixed energy.
/// `atoms` holds the precomputed transfer matrix of each measure atom;
/// `cum_probs` are the cumulative atom probabilities with last entry 1.0.
struct ChainParams {
  const transfer::Mat2* atoms = nullptr;
  const double* cum_probs = nullptr;
  std::size_t num_atoms = 0;
  std::uint64_t steps = 0;
};

/// Runs `count` independent chains. Chain i draws its atom sequence from
/// rng::Stream{keys[i]} (one u01 per step), left-multiplies the selected
/// atom matrices with operator-norm renormalization, and writes
/// log ||A_n|| to out[i].
///
/// All kernels are bitwise-equivalent: the SIMD variants perform the exact
/// same IEEE operations per lane as the scalar reference, so results do not
/// depend on which variant runs.
using ChainFn = void (*)(const ChainParams&, const std::uint64_t* keys,
                         double* out, std::size_t count);

ChainFn scalar_kernel();
ChainFn avx2_kernel();   // nullptr when not compiled in or not supported
ChainFn active_kernel();

/// Overrides dispatch: name is "auto", "scalar" or "avx2". Unknown or
/// unavailable names fall back to auto. The environment variable
/// ANDERSON1D_KERNEL, when set, is applied on first use.
void force_kernel(const char* name);
const char* active_kernel_name();

}  // namespace anderson::kernels
