#include "oracles.hpp"

#include <cmath>

#include "anderson1d/rng.hpp"
#include "anderson1d/transfer.hpp"

namespace oracles {

using anderson::model::Piece;
using anderson::model::Segment;
using anderson::model::SingleSiteMeasure;
using anderson::model::Word;
using anderson::transfer::Mat2;
using anderson::transfer::Mat2C;
using cplx = std::complex<double>;

namespace {

// One RK4 step of u' = w, w' = coeff * u over step h (signs folded into
// coeff and h by the caller).
void rk4_step(cplx& u, cplx& w, cplx coeff, double h) {
  const cplx k1u = w;
  const cplx k1w = coeff * u;
  const cplx k2u = w + 0.5 * h * k1w;
  const cplx k2w = coeff * (u + 0.5 * h * k1u);
  const cplx k3u = w + 0.5 * h * k2w;
  const cplx k3w = coeff * (u + 0.5 * h * k2u);
  const cplx k4u = w + h * k3w;
  const cplx k4w = coeff * (u + h * k3u);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
}

void integrate_segment(cplx& u, cplx& w, cplx coeff, double length,
                       int steps_per_unit) {
  const int steps =
      std::max(16, static_cast<int>(std::ceil(length * steps_per_unit)));
  const double h = length / steps;
  for (int s = 0; s < steps; ++s) rk4_step(u, w, coeff, h);
}

}  // namespace

std::complex<double> shooting_mfunction(const Piece& f, cplx energy,
                                        int steps_per_unit) {
  // Integrate from the right endpoint towards 0 in reversed coordinates:
  // with z(t) = u(T - t), the system is z' = -w, w' = -(V - E) z, i.e. both
  // signs flip, which a negative step width realizes.
  cplx u = 0.0;   // u(T)
  cplx w = -1.0;  // u'(T)
  const auto& segs = f.segments();
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    const cplx coeff = cplx(it->value, 0.0) - energy;
    const int steps =
        std::max(16, static_cast<int>(std::ceil(it->length * steps_per_unit)));
    const double h = -it->length / steps;
    for (int s = 0; s < steps; ++s) rk4_step(u, w, coeff, h);
  }
  return w / u;
}

Mat2C shooting_transfer(const Piece& f, cplx energy, int steps_per_unit) {
  cplx u1 = 1.0, w1 = 0.0;  // solution with (u, u')(0) = (1, 0)
  cplx u2 = 0.0, w2 = 1.0;  // solution with (u, u')(0) = (0, 1)
  for (const Segment& s : f.segments()) {
    const cplx coeff = cplx(s.value, 0.0) - energy;
    integrate_segment(u1, w1, coeff, s.length, steps_per_unit);
    integrate_segment(u2, w2, coeff, s.length, steps_per_unit);
  }
  return {u1, u2, w1, w2};
}

double direct_lognorm(const Word& word, double energy) {
  Mat2 product = Mat2::identity();
  for (const Piece& p : word.pieces) {
    product = anderson::transfer::transfer_piece(p, energy) * product;
  }
  return std::log(anderson::transfer::opnorm(product));
}

double single_orbit_exponent(const SingleSiteMeasure& mu, double energy,
                             std::int64_t n, std::uint64_t seed) {
  std::vector<Mat2> mats;
  mats.reserve(mu.num_atoms());
  for (const auto& a : mu.atoms()) {
    mats.push_back(anderson::transfer::transfer_piece(a.piece, energy));
  }
  const anderson::rng::Stream stream{seed};
  Mat2 frame = Mat2::identity();
  double log_norm = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const std::size_t idx = anderson::model::atom_index_from_u01(
        mu.cum_probs(), stream.u01(static_cast<std::uint64_t>(k)));
    frame = mats[idx] * frame;
    const double s = anderson::transfer::opnorm(frame);
    frame = {frame.a / s, frame.b / s, frame.c / s, frame.d / s};
    log_norm += std::log(s);
  }
  return log_norm / static_cast<double>(n);
}

}  // namespace oracles
