// AVX2 chain kernel: four independent chains per register, one lane each.
// Compiled with -mavx2 only (no FMA) so every lane performs exactly the
// IEEE operations of the scalar reference in chain_scalar.cpp; the
// equivalence tests assert bitwise-identical output.

#ifdef ANDERSON1D_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "anderson1d/kernels.hpp"
#include "anderson1d/rng.hpp"
#include "chain_common.hpp"

namespace anderson::kernels {

namespace {

void run_chain4(const ChainParams& p, const std::uint64_t* keys, double* out) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d fold_hi = _mm256_set1_pd(kFoldHi);
  const __m256d fold_lo = _mm256_set1_pd(kFoldLo);
  const __m256d abs_mask =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));

  __m256d fa = one, fb = zero, fc = zero, fd = one;
  __m256d prod = one;
  alignas(32) double acc[4] = {0.0, 0.0, 0.0, 0.0};

  for (std::uint64_t step = 0; step < p.steps; ++step) {
    // RNG and atom selection are integer/compare work; doing them per lane
    // in scalar keeps them trivially identical to the reference.
    std::size_t idx[4];
    for (int l = 0; l < 4; ++l) {
      const double u = rng::Stream{keys[l]}.u01(step);
      std::size_t k = 0;
      for (std::size_t j = 0; j + 1 < p.num_atoms; ++j) {
        k += (u >= p.cum_probs[j]) ? 1u : 0u;
      }
      idx[l] = k;
    }
    const transfer::Mat2& m0 = p.atoms[idx[0]];
    const transfer::Mat2& m1 = p.atoms[idx[1]];
    const transfer::Mat2& m2 = p.atoms[idx[2]];
    const transfer::Mat2& m3 = p.atoms[idx[3]];
    const __m256d ma = _mm256_set_pd(m3.a, m2.a, m1.a, m0.a);
    const __m256d mb = _mm256_set_pd(m3.b, m2.b, m1.b, m0.b);
    const __m256d mc = _mm256_set_pd(m3.c, m2.c, m1.c, m0.c);
    const __m256d md = _mm256_set_pd(m3.d, m2.d, m1.d, m0.d);

    const __m256d na =
        _mm256_add_pd(_mm256_mul_pd(ma, fa), _mm256_mul_pd(mb, fc));
    const __m256d nb =
        _mm256_add_pd(_mm256_mul_pd(ma, fb), _mm256_mul_pd(mb, fd));
    const __m256d nc =
        _mm256_add_pd(_mm256_mul_pd(mc, fa), _mm256_mul_pd(md, fc));
    const __m256d nd =
        _mm256_add_pd(_mm256_mul_pd(mc, fb), _mm256_mul_pd(md, fd));

    const __m256d q = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(na, na), _mm256_mul_pd(nb, nb)),
        _mm256_add_pd(_mm256_mul_pd(nc, nc), _mm256_mul_pd(nd, nd)));
    const __m256d det =
        _mm256_sub_pd(_mm256_mul_pd(na, nd), _mm256_mul_pd(nb, nc));
    const __m256d t = _mm256_mul_pd(two, _mm256_and_pd(det, abs_mask));
    const __m256d lo = _mm256_sub_pd(q, t);
    const __m256d s = _mm256_mul_pd(
        half, _mm256_add_pd(_mm256_sqrt_pd(_mm256_add_pd(q, t)),
                            _mm256_sqrt_pd(_mm256_max_pd(lo, zero))));

    const __m256d inv = _mm256_div_pd(one, s);
    fa = _mm256_mul_pd(na, inv);
    fb = _mm256_mul_pd(nb, inv);
    fc = _mm256_mul_pd(nc, inv);
    fd = _mm256_mul_pd(nd, inv);

    prod = _mm256_mul_pd(prod, s);
    const __m256d over =
        _mm256_or_pd(_mm256_cmp_pd(prod, fold_hi, _CMP_GT_OQ),
                     _mm256_cmp_pd(prod, fold_lo, _CMP_LT_OQ));
    const int mask = _mm256_movemask_pd(over);
    if (mask != 0) {
      alignas(32) double pv[4];
      _mm256_store_pd(pv, prod);
      for (int l = 0; l < 4; ++l) {
        if (mask & (1 << l)) {
          acc[l] += std::log(pv[l]);
          pv[l] = 1.0;
        }
      }
      prod = _mm256_load_pd(pv);
    }
  }

  alignas(32) double pv[4];
  _mm256_store_pd(pv, prod);
  for (int l = 0; l < 4; ++l) out[l] = acc[l] + std::log(pv[l]);
}

void chain_avx2(const ChainParams& p, const std::uint64_t* keys, double* out,
                std::size_t count) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) run_chain4(p, keys + i, out + i);
  if (i < count) scalar_kernel()(p, keys + i, out + i, count - i);
}

}  // namespace

ChainFn avx2_kernel_impl() { return &chain_avx2; }

}  // namespace anderson::kernels

#endif  // ANDERSON1D_HAVE_AVX2
