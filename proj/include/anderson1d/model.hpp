#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace anderson::model {

// One constant plateau of a piecewise-constant potential.
struct Segment {
  double value;
  double length;
};

/// A single-site potential: a piecewise-constant function on
/// [0, total_length). Adjacent segments of equal height are merged on
/// construction, so two Pieces encoding the same function with the same
/// breakpoint structure end up with identical segment lists.
class Piece {
 public:
  explicit Piece(std::vector<Segment> segments);
  Piece(std::initializer_list<Segment> segments)
      : Piece(std::vector<Segment>(segments)) {}

  const std::vector<Segment>& segments() const { return segments_; }
  double total_length() const { return total_length_; }

  // Height at position x, clamped into [0, total_length); test helper.
  double value_at(double x) const;

 private:
  std::vector<Segment> segments_;
  double total_length_ = 0.0;
};

double l2_norm(const Piece& f);

/// Star product: f1 on [0, l1) followed by f2 on [l1, l1+l2).
Piece concat(const Piece& f1, const Piece& f2);

struct EqualAeResult {
  bool equal;
  double disagreement_measure;  // Lebesgue measure of {x : |f1 - f2| > tol}
};

/// Exact almost-everywhere comparison via a merge of the two breakpoint
/// partitions. Pieces of different total length are never equal; the
/// length mismatch is added to the disagreement measure.
EqualAeResult pieces_equal_ae(const Piece& f1, const Piece& f2,
                              double tol_val = 1e-12);

struct Atom {
  Piece piece;
  double prob;
};

/// Finitely supported probability measure on pieces. Validates that the
/// probabilities sum to one (tolerance 1e-12), that every piece length lies
/// in [delta, m_len], and records the largest atom L2 norm (finite by
/// construction for finite support).
class SingleSiteMeasure {
 public:
  SingleSiteMeasure(std::vector<Atom> atoms, double delta, double m_len);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t num_atoms() const { return atoms_.size(); }
  double delta() const { return delta_; }
  double m_len() const { return m_len_; }
  double l2_bound() const { return l2_bound_; }

  // Cumulative atom probabilities; the last entry is exactly 1.0.
  const std::vector<double>& cum_probs() const { return cum_probs_; }

 private:
  std::vector<Atom> atoms_;
  double delta_;
  double m_len_;
  double l2_bound_;
  std::vector<double> cum_probs_;
};

// Maps a uniform draw to an atom index; shared by sample_word and the chain
// kernels so that both see the same atom sequence for the same stream.
std::size_t atom_index_from_u01(const std::vector<double>& cum_probs,
                                double u);

/// A finite realization: n concatenated pieces plus the partial-sum
/// endpoints 0 = s_0 < s_1 < ... < s_n.
struct Word {
  std::vector<Piece> pieces;
  std::vector<double> endpoints;
  std::vector<std::uint32_t> atom_indices;  // provenance within the measure
};

/// Draws n atoms i.i.d. from mu using the counter-based stream seeded by
/// `seed`. Same inputs give a bitwise-identical Word.
Word sample_word(const SingleSiteMeasure& mu, std::int64_t n,
                 std::uint64_t seed);

struct NcReport {
  bool holds;
  std::optional<std::pair<std::size_t, std::size_t>> witness_pair;
  double disagreement_measure;
};

/// Nontriviality: looks for two support atoms whose star products disagree
/// on a set of positive Lebesgue measure. Returns the first witness pair in
/// scan order, or holds = false when every pair commutes.
NcReport check_nontriviality(const SingleSiteMeasure& mu,
                             double tol_val = 1e-12);

}  // namespace anderson::model
