#pragma once

#include <cmath>
#include <complex>

namespace anderson::transfer {

/// 2x2 matrix [[a, b], [c, d]] over real or complex scalars. Everything this
/// library produces is unimodular (det = 1) up to rounding, but the type
/// itself does not enforce that.
template <class S>
struct Mat2T {
  S a{}, b{}, c{}, d{};

  static constexpr Mat2T identity() { return {S{1}, S{0}, S{0}, S{1}}; }

  constexpr S trace() const { return a + d; }
  constexpr S det() const { return a * d - b * c; }

  // Inverse assuming det = 1.
  constexpr Mat2T sl2_inverse() const { return {d, -b, -c, a}; }

  friend constexpr Mat2T operator*(const Mat2T& x, const Mat2T& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend constexpr Mat2T operator-(const Mat2T& x, const Mat2T& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
};

using Mat2 = Mat2T<double>;
using Mat2C = Mat2T<std::complex<double>>;

template <class S>
constexpr Mat2T<S> commutator(const Mat2T<S>& x, const Mat2T<S>& y) {
  return x * y - y * x;
}

inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const std::complex<double>& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

// Largest singular value. With q = sum of squared entry moduli and
// p = |det|, the singular values satisfy s1^2 + s2^2 = q and s1 s2 = p,
// hence s1 = (sqrt(q + 2p) + sqrt(q - 2p)) / 2. This closed form avoids
// squaring q and is branch-free; the chain kernels replicate it
// operation-for-operation, so keep the evaluation order fixed.
template <class S>
inline double opnorm(const Mat2T<S>& m) {
  const double q = (abs_sq(m.a) + abs_sq(m.b)) + (abs_sq(m.c) + abs_sq(m.d));
  const double p = std::abs(m.det());
  const double t = 2.0 * p;
  const double lo = q - t;
  return 0.5 * (std::sqrt(q + t) + std::sqrt(lo > 0.0 ? lo : 0.0));
}

template <class S>
inline double frobenius(const Mat2T<S>& m) {
  return std::sqrt((abs_sq(m.a) + abs_sq(m.b)) + (abs_sq(m.c) + abs_sq(m.d)));
}

}  // namespace anderson::transfer
