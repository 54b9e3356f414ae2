#include "anderson1d/transfer.hpp"

#include <cmath>
#include <stdexcept>

#include "anderson1d/errors.hpp"

namespace anderson::transfer {

namespace {

// cos(sqrt(x)) and sin(sqrt(x))/sqrt(x) as functions of x = k^2 len^2; both
// are entire in x, which is what makes the k^2 = 0 crossover harmless.
template <class S>
S cos_series(S x) {
  return S{1} + x * (S{-0.5} + x * (S{1.0 / 24.0} - x * S{1.0 / 720.0}));
}
template <class S>
S sinc_series(S x) {
  return S{1} +
         x * (S{-1.0 / 6.0} + x * (S{1.0 / 120.0} - x * S{1.0 / 5040.0}));
}

constexpr double kSeriesThreshold = 1e-8;
constexpr double kDegenerateB = 1e-14;

}  // namespace

Mat2 transfer_constant(double v, double len, double energy) {
  if (!(len > 0.0)) throw std::invalid_argument("segment length must be > 0");
  const double k2 = energy - v;
  const double x = k2 * len * len;
  double a, b;
  if (std::fabs(x) < kSeriesThreshold) {
    a = cos_series(x);
    b = len * sinc_series(x);
  } else if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    a = std::cos(k * len);
    b = std::sin(k * len) / k;
  } else {
    const double kappa = std::sqrt(-k2);
    a = std::cosh(kappa * len);
    b = std::sinh(kappa * len) / kappa;
  }
  // c = -k^2 b in every branch; d = a by symmetry of a constant plateau.
  return {a, b, -k2 * b, a};
}

Mat2C transfer_constant(double v, double len, std::complex<double> energy) {
  if (!(len > 0.0)) throw std::invalid_argument("segment length must be > 0");
  const std::complex<double> k2 = energy - v;
  const std::complex<double> x = k2 * (len * len);
  std::complex<double> a, b;
  if (std::abs(x) < kSeriesThreshold) {
    a = cos_series(x);
    b = len * sinc_series(x);
  } else {
    // Entries are even in k, so the branch of the square root is immaterial.
    const std::complex<double> k = std::sqrt(k2);
    a = std::cos(k * len);
    b = std::sin(k * len) / k;
  }
  return {a, b, -k2 * b, a};
}

namespace {

template <class E, class M>
M piece_product(const model::Piece& f, E energy) {
  M m = M::identity();
  for (const model::Segment& s : f.segments()) {
    m = transfer_constant(s.value, s.length, energy) * m;
  }
  return m;
}

}  // namespace

Mat2 transfer_piece(const model::Piece& f, double energy) {
  return piece_product<double, Mat2>(f, energy);
}

Mat2C transfer_piece(const model::Piece& f, std::complex<double> energy) {
  return piece_product<std::complex<double>, Mat2C>(f, energy);
}

LogNormState cocycle_lognorm(const model::Word& word, double energy) {
  if (word.pieces.empty()) {
    throw std::invalid_argument("cocycle over an empty word");
  }
  Mat2 frame = Mat2::identity();
  double log_norm = 0.0;
  for (const model::Piece& p : word.pieces) {
    frame = transfer_piece(p, energy) * frame;
    const double s = opnorm(frame);
    frame = {frame.a / s, frame.b / s, frame.c / s, frame.d / s};
    log_norm += std::log(s);
  }
  return {frame, log_norm, static_cast<std::int64_t>(word.pieces.size())};
}

std::complex<double> mfunction(const model::Piece& f,
                               std::complex<double> energy) {
  const Mat2C t = transfer_piece(f, energy);
  if (std::abs(t.b) < kDegenerateB) {
    throw DegenerateEnergyError("E is a Dirichlet eigenvalue of the interval");
  }
  return -t.a / t.b;
}

double mfunction(const model::Piece& f, double energy) {
  const Mat2 t = transfer_piece(f, energy);
  if (std::fabs(t.b) < kDegenerateB) {
    throw DegenerateEnergyError("E is a Dirichlet eigenvalue of the interval");
  }
  return -t.a / t.b;
}

}  // namespace anderson::transfer
