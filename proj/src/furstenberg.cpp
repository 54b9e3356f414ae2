#include "anderson1d/furstenberg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "anderson1d/transfer.hpp"

namespace anderson::furstenberg {

using transfer::Mat2;
using transfer::opnorm;
using transfer::transfer_piece;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kCertified:
      return "CERTIFIED";
    case Verdict::kNearDegenerate:
      return "NEAR_DEGENERATE";
    default:
      return "NOT_CERTIFIED";
  }
}

const char* to_string(ScanFunction f) {
  switch (f) {
    case ScanFunction::kCommutatorDet:
      return "commutator_det";
    case ScanFunction::kTraceA:
      return "trace_a";
    default:
      return "trace_b";
  }
}

std::string witness_to_string(const std::vector<std::int8_t>& tokens) {
  static constexpr char kLetters[4] = {'a', 'b', 'A', 'B'};
  std::string s;
  s.reserve(tokens.size());
  for (std::int8_t t : tokens) s.push_back(kLetters[t & 3]);
  return s;
}

namespace {

// Noise floors: quantities whose magnitude is explained by rounding alone
// are treated as exactly zero. det [A,B] of commuting matrices computes to
// ~(eps ||A|| ||B||)^2, far below these floors; genuine roots pass through
// the (floor, tol] near-degenerate band instead.
double commutator_floor(double norm_a, double norm_b) {
  const double s = norm_a * norm_b;
  return 1e-24 * s * s;
}
double trace_floor(double norm) { return 1e-13 * std::max(1.0, norm); }

struct WitnessHit {
  std::vector<std::int8_t> word;
  double trace;
};

// Breadth-first search over reduced words in the pair's generators and
// their inverses; returns the shortest product with |trace| > 2 + margin.
std::optional<WitnessHit> find_non_elliptic(const Mat2& a, const Mat2& b,
                                            int k_max, double margin) {
  struct Node {
    Mat2 m;
    std::vector<std::int8_t> word;
  };
  const Mat2 gens[4] = {a, b, a.sl2_inverse(), b.sl2_inverse()};
  std::deque<Node> queue;
  for (std::int8_t t = 0; t < 4; ++t) {
    queue.push_back({gens[t], {t}});
  }
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (std::fabs(node.m.trace()) > 2.0 + margin) {
      return WitnessHit{std::move(node.word), node.m.trace()};
    }
    if (static_cast<int>(node.word.size()) >= k_max) continue;
    const std::int8_t last = node.word.back();
    for (std::int8_t t = 0; t < 4; ++t) {
      if (t == (last ^ 2)) continue;  // skip g g^-1 cancellations
      Node next{gens[t] * node.m, node.word};
      next.word.push_back(t);
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

int verdict_rank(Verdict v) {
  switch (v) {
    case Verdict::kCertified:
      return 2;
    case Verdict::kNearDegenerate:
      return 1;
    default:
      return 0;
  }
}

}  // namespace

TypeFCertificate certify_type_f(const model::SingleSiteMeasure& mu,
                                double energy, const CertifyOptions& opt) {
  TypeFCertificate best;
  best.energy = energy;
  best.tol_t = opt.tol_t;
  if (mu.num_atoms() < 2) {
    best.note = "single atom generates an abelian group";
    return best;
  }

  double best_margin = -1.0;
  for (std::size_t i = 0; i < mu.num_atoms(); ++i) {
    for (std::size_t j = i + 1; j < mu.num_atoms(); ++j) {
      const Mat2 a = transfer_piece(mu.atoms()[i].piece, energy);
      const Mat2 b = transfer_piece(mu.atoms()[j].piece, energy);
      const double norm_a = opnorm(a);
      const double norm_b = opnorm(b);
      const double tol_c_abs =
          opt.tol_c_rel * (norm_a * norm_a) * (norm_b * norm_b);
      const double floor_c = commutator_floor(norm_a, norm_b);

      TypeFCertificate cert;
      cert.energy = energy;
      cert.pair = {i, j};
      cert.commutator_det = commutator(a, b).det();
      cert.trace_a = a.trace();
      cert.trace_b = b.trace();
      cert.tol_c_abs = tol_c_abs;
      cert.tol_t = opt.tol_t;

      const double cd = std::fabs(cert.commutator_det);
      const double ta = std::fabs(cert.trace_a);
      const double tb = std::fabs(cert.trace_b);
      const bool pass_c = cd > tol_c_abs;
      const bool pass_ta = ta > opt.tol_t;
      const bool pass_tb = tb > opt.tol_t;

      const auto witness = find_non_elliptic(a, b, opt.k_max, opt.tol_t);
      if (witness) {
        cert.non_elliptic_witness = witness->word;
        cert.witness_trace = witness->trace;
      }

      if (pass_c && pass_ta && pass_tb && witness) {
        cert.verdict = Verdict::kCertified;
      } else {
        const bool near_c = cd > floor_c && cd <= tol_c_abs;
        const bool near_ta = ta > trace_floor(norm_a) && ta <= opt.tol_t;
        const bool near_tb = tb > trace_floor(norm_b) && tb <= opt.tol_t;
        if (near_c || near_ta || near_tb) {
          cert.verdict = Verdict::kNearDegenerate;
          cert.note = "margin inside tolerance band: candidate exceptional energy";
        } else {
          cert.verdict = Verdict::kNotCertified;
          if (pass_c && pass_ta && pass_tb && !witness) {
            cert.note = "commutator and trace conditions passed but no "
                        "non-elliptic product within k_max";
          }
        }
      }

      const double margin =
          std::min({cd / tol_c_abs, ta / opt.tol_t, tb / opt.tol_t});
      if (verdict_rank(cert.verdict) > verdict_rank(best.verdict) ||
          (verdict_rank(cert.verdict) == verdict_rank(best.verdict) &&
           margin > best_margin)) {
        best = cert;
        best_margin = margin;
      }
    }
  }
  return best;
}

namespace {

double scan_value(ScanFunction which, const Mat2& a, const Mat2& b) {
  switch (which) {
    case ScanFunction::kCommutatorDet:
      return commutator(a, b).det();
    case ScanFunction::kTraceA:
      return a.trace();
    default:
      return b.trace();
  }
}

}  // namespace

std::vector<double> DiscreteSetScan::energies(double merge_tol) const {
  std::vector<double> es;
  es.reserve(roots.size());
  for (const RootRecord& r : roots) es.push_back(r.energy);
  std::sort(es.begin(), es.end());
  std::vector<double> merged;
  for (double e : es) {
    if (merged.empty() || e - merged.back() > merge_tol) merged.push_back(e);
  }
  return merged;
}

DiscreteSetScan find_discrete_set(const model::SingleSiteMeasure& mu,
                                  std::pair<std::size_t, std::size_t> pair,
                                  double e_lo, double e_hi, int grid_points,
                                  double tol) {
  if (!(e_lo < e_hi)) throw std::invalid_argument("need e_lo < e_hi");
  if (grid_points < 2) throw std::invalid_argument("need grid_points >= 2");
  if (pair.first >= mu.num_atoms() || pair.second >= mu.num_atoms() ||
      pair.first == pair.second) {
    throw std::invalid_argument("invalid atom pair");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");

  const model::Piece& f1 = mu.atoms()[pair.first].piece;
  const model::Piece& f2 = mu.atoms()[pair.second].piece;
  const auto eval_pair = [&](double e) {
    return std::make_pair(transfer_piece(f1, e), transfer_piece(f2, e));
  };

  const int n = grid_points;
  std::vector<double> grid(n);
  std::vector<std::array<double, 3>> values(n);
  double max_norm_prod = 0.0;
  std::array<double, 3> max_abs{0.0, 0.0, 0.0};
  for (int t = 0; t < n; ++t) {
    grid[t] = e_lo + (e_hi - e_lo) * static_cast<double>(t) /
                         static_cast<double>(n - 1);
    const auto [a, b] = eval_pair(grid[t]);
    max_norm_prod = std::max(max_norm_prod, opnorm(a) * opnorm(b));
    for (int g = 0; g < 3; ++g) {
      values[t][g] = scan_value(static_cast<ScanFunction>(g), a, b);
      max_abs[g] = std::max(max_abs[g], std::fabs(values[t][g]));
    }
  }

  DiscreteSetScan out;
  const std::array<double, 3> floors = {
      1e-20 * std::max(1.0, max_norm_prod * max_norm_prod),
      1e-14 * std::max(1.0, max_norm_prod),
      1e-14 * std::max(1.0, max_norm_prod)};

  for (int g = 0; g < 3; ++g) {
    const ScanFunction which = static_cast<ScanFunction>(g);
    if (max_abs[g] <= floors[g]) {
      out.identically_zero[g] = true;
      out.warnings.push_back(std::string("IdenticallyZero: ") +
                             to_string(which) +
                             " vanishes on the whole grid (degenerate pair)");
      continue;
    }
    const auto f = [&](double e) {
      const auto [a, b] = eval_pair(e);
      return scan_value(which, a, b);
    };
    for (int t = 0; t + 1 < n; ++t) {
      double lo = grid[t], hi = grid[t + 1];
      double flo = values[t][g], fhi = values[t + 1][g];
      if (flo == 0.0) {
        out.roots.push_back({lo, which});
        continue;
      }
      if (flo * fhi >= 0.0) continue;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fmid < 0.0) {
          hi = mid;
          fhi = fmid;
        } else {
          lo = mid;
          flo = fmid;
        }
      }
      // Secant polish inside the final bracket drives |g(root)| to rounding
      // level even where the slope is steep.
      double root = 0.5 * (lo + hi);
      double x0 = lo, x1 = hi, y0 = flo, y1 = fhi;
      for (int it = 0; it < 3 && y1 != y0; ++it) {
        const double x2 = x1 - y1 * (x1 - x0) / (y1 - y0);
        if (!(x2 >= grid[t] && x2 <= grid[t + 1])) break;
        x0 = x1;
        y0 = y1;
        x1 = x2;
        y1 = f(x2);
        root = x1;
      }
      out.roots.push_back({root, which});
    }
    // Extremum-near-zero heuristic for root pairs hiding inside one cell.
    for (int t = 1; t + 1 < n; ++t) {
      const double dl = values[t][g] - values[t - 1][g];
      const double dr = values[t + 1][g] - values[t][g];
      const bool extremum = (dl > 0.0 && dr < 0.0) || (dl < 0.0 && dr > 0.0);
      const bool near_zero = std::fabs(values[t][g]) < 0.02 * max_abs[g];
      const bool bracketed = values[t - 1][g] * values[t][g] < 0.0 ||
                             values[t][g] * values[t + 1][g] < 0.0;
      if (extremum && near_zero && !bracketed) {
        out.warnings.push_back(
            std::string("GridTooCoarse: possible root pair of ") +
            to_string(which) + " near E = " + std::to_string(grid[t]));
      }
    }
  }

  std::sort(out.roots.begin(), out.roots.end(),
            [](const RootRecord& x, const RootRecord& y) {
              return x.energy < y.energy;
            });
  return out;
}

std::vector<std::complex<double>> default_probe_energies(
    const model::Piece& f1, const model::Piece& f2) {
  double vmin = f1.segments().front().value;
  for (const model::Segment& s : f1.segments()) vmin = std::min(vmin, s.value);
  for (const model::Segment& s : f2.segments()) vmin = std::min(vmin, s.value);
  std::vector<std::complex<double>> energies;
  energies.reserve(40);
  for (int j = 0; j < 20; ++j) {
    energies.emplace_back(vmin - 1.0 - static_cast<double>(j), 0.0);
  }
  for (int j = 0; j < 20; ++j) {
    energies.emplace_back(0.0, 1.0 + static_cast<double>(j));
  }
  return energies;
}

BorgMarchenkoResult borg_marchenko_check(
    const model::Piece& f1, const model::Piece& f2,
    const std::vector<std::complex<double>>& energies) {
  const double l1 = f1.total_length(), l2 = f2.total_length();
  if (std::fabs(l1 - l2) > 1e-12 * std::max(1.0, std::max(l1, l2))) {
    throw std::invalid_argument("pieces must have the same total length");
  }
  if (energies.empty()) throw std::invalid_argument("no probe energies");

  BorgMarchenkoResult out{false, 0.0, 0.0, {}};
  out.rows.reserve(energies.size());
  for (const std::complex<double>& e : energies) {
    const transfer::Mat2C t1 = transfer_piece(f1, e);
    const transfer::Mat2C t2 = transfer_piece(f2, e);
    const double gap = opnorm(t1 - t2);
    const double m_gap =
        std::abs(transfer::mfunction(f1, e) - transfer::mfunction(f2, e));
    out.rows.push_back({e, gap, m_gap});
    out.max_matrix_gap = std::max(out.max_matrix_gap, gap);
    out.max_m_gap = std::max(out.max_m_gap, m_gap);
  }
  out.distinct = out.max_matrix_gap > 1e-8;
  return out;
}

}  // namespace anderson::furstenberg
