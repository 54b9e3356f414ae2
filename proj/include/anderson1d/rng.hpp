#pragma once

#include <cstdint>

namespace anderson::rng {

// SplitMix64 constants (Steele--Lea--Flood; finalizer due to Stafford/Vigna).
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Splits one master seed into decorrelated child keys (per energy, per
// sample, per grid cell). Purely arithmetic, so derivation commutes with
// any evaluation order.
constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t tag) noexcept {
  return mix64(key + kGolden * mix64(tag + kGolden));
}

// Stateless counter-based stream: word(i) is the i-th output of the
// SplitMix64 sequence with initial state `key`. Any output is addressable
// without generating its predecessors, so workers may consume a stream in
// any partition and still agree bitwise with a serial run.
struct Stream {
  std::uint64_t key = 0;

  constexpr std::uint64_t word(std::uint64_t counter) const noexcept {
    return mix64(key + (counter + 1) * kGolden);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double u01(std::uint64_t counter) const noexcept {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }
};

}  // namespace anderson::rng
