#pragma once

// Constants shared by the scalar and SIMD chain kernels. The pending norm
// product is folded into the log accumulator only when it leaves
// [2^-512, 2^512]; the thresholds are exact powers of two and every
// operation on the product is correctly rounded, so scalar and SIMD lanes
// trip the fold at exactly the same steps.
namespace anderson::kernels {

inline constexpr double kFoldHi = 0x1p512;
inline constexpr double kFoldLo = 0x1p-512;

}  // namespace anderson::kernels
