#pragma once

#include <complex>
#include <cstdint>

#include "anderson1d/mat2.hpp"
#include "anderson1d/model.hpp"

namespace anderson::transfer {

/// Transfer matrix across one constant plateau: propagates (psi, psi') of
/// -psi'' + v psi = E psi over an interval of length len. With
/// x = (E - v) len^2 the entries are even functions of sqrt(E - v), so one
/// closed form covers the oscillatory (E > v), affine (E = v) and
/// hyperbolic (E < v) branches; a series branch takes over for
/// |x| < 1e-8 to cross k^2 = 0 without cancellation.
Mat2 transfer_constant(double v, double len, double energy);
Mat2C transfer_constant(double v, double len, std::complex<double> energy);

/// Transfer matrix of a whole piece; later segments multiply on the left
/// (propagation order).
Mat2 transfer_piece(const model::Piece& f, double energy);
Mat2C transfer_piece(const model::Piece& f, std::complex<double> energy);

struct LogNormState {
  Mat2 frame;       // renormalized running product, operator norm 1
  double log_norm;  // accumulated log ||A_n||
  std::int64_t steps;
};

/// Left-multiplies the transfer matrices of the word's pieces in order
/// (first piece applied first), rescaling by the operator norm after every
/// multiplication and accumulating the logs of the rescaling constants.
LogNormState cocycle_lognorm(const model::Word& word, double energy);

/// Weyl m-function u'(0)/u(0) for the solution with a Dirichlet condition
/// at the right endpoint: equals -a/b for the transfer matrix
/// [[a, b], [c, d]]. Well defined for nonreal E and for real E below the
/// minimum of the potential. Throws DegenerateEnergyError when |b| < 1e-14.
std::complex<double> mfunction(const model::Piece& f,
                               std::complex<double> energy);
double mfunction(const model::Piece& f, double energy);

}  // namespace anderson::transfer
