#include <cmath>

#include "anderson1d/kernels.hpp"
#include "anderson1d/rng.hpp"
#include "chain_common.hpp"

namespace anderson::kernels {

namespace {

// Reference chain. The AVX2 kernel mirrors this computation
// operation-for-operation (same order, no FMA); any change here must be
// replicated there or the bitwise-equivalence tests will fail.
void run_chain(const ChainParams& p, std::uint64_t key, double* out) {
  double fa = 1.0, fb = 0.0, fc = 0.0, fd = 1.0;  // frame, opnorm 1
  double prod = 1.0;                              // pending norm product
  double acc = 0.0;                               // folded log norm
  const rng::Stream stream{key};
  for (std::uint64_t step = 0; step < p.steps; ++step) {
    const double u = stream.u01(step);
    std::size_t idx = 0;
    for (std::size_t j = 0; j + 1 < p.num_atoms; ++j) {
      idx += (u >= p.cum_probs[j]) ? 1u : 0u;
    }
    const transfer::Mat2& m = p.atoms[idx];

    const double na = m.a * fa + m.b * fc;
    const double nb = m.a * fb + m.b * fd;
    const double nc = m.c * fa + m.d * fc;
    const double nd = m.c * fb + m.d * fd;

    // Largest singular value; keep in sync with transfer::opnorm.
    const double q = (na * na + nb * nb) + (nc * nc + nd * nd);
    const double det = na * nd - nb * nc;
    const double t = 2.0 * std::fabs(det);
    const double lo = q - t;
    const double s =
        0.5 * (std::sqrt(q + t) + std::sqrt(lo > 0.0 ? lo : 0.0));

    const double inv = 1.0 / s;
    fa = na * inv;
    fb = nb * inv;
    fc = nc * inv;
    fd = nd * inv;

    prod *= s;
    if (prod > kFoldHi || prod < kFoldLo) {
      acc += std::log(prod);
      prod = 1.0;
    }
  }
  *out = acc + std::log(prod);
}

void chain_scalar(const ChainParams& p, const std::uint64_t* keys, double* out,
                  std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) run_chain(p, keys[i], &out[i]);
}

}  // namespace

ChainFn scalar_kernel() { return &chain_scalar; }

}  // namespace anderson::kernels
