#include "anderson1d/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "anderson1d/rng.hpp"

namespace anderson::model {

Piece::Piece(std::vector<Segment> segments) {
  if (segments.empty()) {
    throw std::invalid_argument("piece needs at least one segment");
  }
  segments_.reserve(segments.size());
  for (const Segment& s : segments) {
    if (!std::isfinite(s.length) || s.length <= 0.0) {
      throw std::invalid_argument("segment length " + std::to_string(s.length) +
                                  " is not positive");
    }
    if (!std::isfinite(s.value)) {
      throw std::invalid_argument("segment value is not finite");
    }
    if (!segments_.empty() && segments_.back().value == s.value) {
      segments_.back().length += s.length;
    } else {
      segments_.push_back(s);
    }
    total_length_ += s.length;
  }
}

double Piece::value_at(double x) const {
  double acc = 0.0;
  for (const Segment& s : segments_) {
    acc += s.length;
    if (x < acc) return s.value;
  }
  return segments_.back().value;
}

double l2_norm(const Piece& f) {
  double sum = 0.0;
  for (const Segment& s : f.segments()) sum += s.value * s.value * s.length;
  return std::sqrt(sum);
}

Piece concat(const Piece& f1, const Piece& f2) {
  std::vector<Segment> merged = f1.segments();
  merged.insert(merged.end(), f2.segments().begin(), f2.segments().end());
  return Piece(std::move(merged));
}

EqualAeResult pieces_equal_ae(const Piece& f1, const Piece& f2,
                              double tol_val) {
  const auto& s1 = f1.segments();
  const auto& s2 = f2.segments();

  // Walk the merged breakpoint partition over the shared interval,
  // accumulating the measure of cells where the heights differ by more than
  // tol_val. Identical encodings take exact steps, so their disagreement is
  // exactly zero.
  double disagreement = 0.0;
  std::size_t i = 0, j = 0;
  double rem1 = s1[0].length;
  double rem2 = s2[0].length;
  while (true) {
    const double step = std::min(rem1, rem2);
    if (std::fabs(s1[i].value - s2[j].value) > tol_val) disagreement += step;
    rem1 -= step;
    rem2 -= step;
    if (rem1 <= 0.0) {
      if (++i == s1.size()) break;
      rem1 = s1[i].length;
    }
    if (rem2 <= 0.0) {
      if (++j == s2.size()) break;
      rem2 = s2[j].length;
    }
  }

  disagreement += std::fabs(f1.total_length() - f2.total_length());
  return {disagreement == 0.0, disagreement};
}

SingleSiteMeasure::SingleSiteMeasure(std::vector<Atom> atoms, double delta,
                                     double m_len)
    : atoms_(std::move(atoms)), delta_(delta), m_len_(m_len) {
  if (atoms_.empty()) throw std::invalid_argument("measure needs atoms");
  if (!(delta > 0.0) || !(m_len >= delta)) {
    throw std::invalid_argument("need 0 < delta <= m");
  }
  double sum = 0.0;
  l2_bound_ = 0.0;
  const double slack = 1e-12 * std::max(1.0, m_len);
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const Atom& a = atoms_[k];
    if (!(a.prob > 0.0) || a.prob > 1.0) {
      throw std::invalid_argument("atom " + std::to_string(k) +
                                  ": probability must lie in (0, 1]");
    }
    const double len = a.piece.total_length();
    if (len < delta - slack || len > m_len + slack) {
      throw std::invalid_argument("atom " + std::to_string(k) + ": length " +
                                  std::to_string(len) +
                                  " outside [delta, m]");
    }
    sum += a.prob;
    l2_bound_ = std::max(l2_bound_, l2_norm(a.piece));
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(sum));
  }
  cum_probs_.resize(atoms_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    acc += atoms_[k].prob;
    cum_probs_[k] = acc;
  }
  cum_probs_.back() = 1.0;
}

std::size_t atom_index_from_u01(const std::vector<double>& cum_probs,
                                double u) {
  // Branchless form mirrored by the SIMD kernels: count of thresholds <= u.
  std::size_t idx = 0;
  for (std::size_t j = 0; j + 1 < cum_probs.size(); ++j) {
    idx += (u >= cum_probs[j]) ? 1u : 0u;
  }
  return idx;
}

Word sample_word(const SingleSiteMeasure& mu, std::int64_t n,
                 std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("word length must be >= 1");
  const rng::Stream stream{seed};
  Word w;
  w.pieces.reserve(static_cast<std::size_t>(n));
  w.endpoints.reserve(static_cast<std::size_t>(n) + 1);
  w.atom_indices.reserve(static_cast<std::size_t>(n));
  w.endpoints.push_back(0.0);
  double s = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const std::size_t idx = atom_index_from_u01(
        mu.cum_probs(), stream.u01(static_cast<std::uint64_t>(k)));
    const Piece& p = mu.atoms()[idx].piece;
    w.pieces.push_back(p);
    w.atom_indices.push_back(static_cast<std::uint32_t>(idx));
    s += p.total_length();
    w.endpoints.push_back(s);
  }
  return w;
}

NcReport check_nontriviality(const SingleSiteMeasure& mu, double tol_val) {
  const auto& atoms = mu.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const Piece fwd = concat(atoms[i].piece, atoms[j].piece);
      const Piece rev = concat(atoms[j].piece, atoms[i].piece);
      const EqualAeResult r = pieces_equal_ae(fwd, rev, tol_val);
      if (r.disagreement_measure > 0.0) {
        return {true, std::make_pair(i, j), r.disagreement_measure};
      }
    }
  }
  return {false, std::nullopt, 0.0};
}

}  // namespace anderson::model
