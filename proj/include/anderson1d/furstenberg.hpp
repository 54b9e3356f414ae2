#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anderson1d/mat2.hpp"
#include "anderson1d/model.hpp"

namespace anderson::furstenberg {

enum class Verdict { kCertified, kNearDegenerate, kNotCertified };

const char* to_string(Verdict v);

/// Witness word over the pair's generators: tokens 0 = A, 1 = B,
/// 2 = A^-1, 3 = B^-1 ("a", "b", "A", "B" in string form).
std::string witness_to_string(const std::vector<std::int8_t>& tokens);

/// Per-energy record of the computable positivity conditions for the group
/// generated by a pair of atom transfer matrices: a nonvanishing commutator
/// determinant, nonvanishing traces, and an explicit non-elliptic product
/// (|trace| > 2) of generators, which makes the group contracting.
struct TypeFCertificate {
  double energy = 0.0;
  std::pair<std::size_t, std::size_t> pair{0, 0};
  double commutator_det = 0.0;
  double trace_a = 0.0;
  double trace_b = 0.0;
  std::optional<std::vector<std::int8_t>> non_elliptic_witness;
  double witness_trace = 0.0;
  Verdict verdict = Verdict::kNotCertified;
  double tol_c_abs = 0.0;  // absolute commutator-det threshold after scaling
  double tol_t = 0.0;
  std::string note;
};

struct CertifyOptions {
  // Commutator-det threshold, relative to ||A||^2 ||B||^2.
  double tol_c_rel = 1e-8;
  // Absolute trace threshold; also the margin for |trace| > 2 witnesses.
  double tol_t = 1e-10;
  // Maximum witness word length.
  int k_max = 8;
};

/// Checks every atom pair at the given energy and returns the best
/// certificate (any certifying pair certifies the full group, since the
/// conditions are monotone under group inclusion). Quantities below the
/// floating-point noise floor count as exactly zero, so structurally
/// commuting models come back NOT_CERTIFIED rather than NEAR_DEGENERATE;
/// NEAR_DEGENERATE flags genuinely small nonzero margins, i.e. proximity to
/// an exceptional energy.
TypeFCertificate certify_type_f(const model::SingleSiteMeasure& mu,
                                double energy,
                                const CertifyOptions& opt = {});

enum class ScanFunction : int { kCommutatorDet = 0, kTraceA = 1, kTraceB = 2 };

const char* to_string(ScanFunction f);

struct RootRecord {
  double energy;
  ScanFunction source;
};

struct DiscreteSetScan {
  std::vector<RootRecord> roots;  // sorted by energy
  std::array<bool, 3> identically_zero{false, false, false};
  std::vector<std::string> warnings;

  /// Sorted union of root energies, with roots closer than merge_tol
  /// collapsed.
  std::vector<double> energies(double merge_tol) const;
};

/// Scans det [A(E), B(E)], tr A(E) and tr B(E) for the chosen atom pair on a
/// uniform grid over [e_lo, e_hi], brackets sign changes, refines each root
/// by bisection to width `tol` plus a few secant polish steps, and reports
/// the sorted union: the candidate exceptional energies where the
/// certificate conditions fail. Cells that look like they straddle a root
/// pair (derivative sign flip with a small function value) produce a
/// GridTooCoarse warning.
DiscreteSetScan find_discrete_set(const model::SingleSiteMeasure& mu,
                                  std::pair<std::size_t, std::size_t> pair,
                                  double e_lo, double e_hi, int grid_points,
                                  double tol);

struct ProbeRow {
  std::complex<double> energy;
  double matrix_gap;  // || A^E(f1) - A^E(f2) ||
  double m_gap;       // | m1(E) - m2(E) |
};

struct BorgMarchenkoResult {
  bool distinct;
  double max_matrix_gap;
  double max_m_gap;
  std::vector<ProbeRow> rows;
};

/// Energies probing transfer-matrix equality: 20 real points descending
/// below the minimum potential value and 20 points up the imaginary axis.
std::vector<std::complex<double>> default_probe_energies(
    const model::Piece& f1, const model::Piece& f2);

/// Samples || A^E(f1) - A^E(f2) || over the given energies. Pieces that
/// agree almost everywhere give a zero gap at every energy; pieces that
/// differ on positive measure must eventually show a gap (transfer matrices
/// determine the potential), so distinct = (max gap > 1e-8). Also reports
/// the m-function gaps. Both pieces must have the same total length.
BorgMarchenkoResult borg_marchenko_check(
    const model::Piece& f1, const model::Piece& f2,
    const std::vector<std::complex<double>>& energies);

}  // namespace anderson::furstenberg
