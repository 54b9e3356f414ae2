#include "anderson1d/ldt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anderson1d/errors.hpp"
#include "anderson1d/lyapunov.hpp"
#include "anderson1d/rng.hpp"
#include "anderson1d/transfer.hpp"

namespace anderson::ldt {

namespace {

// Child-seed tags inside one fit_decay call: the reference run uses tag 0,
// grid cell k uses tag k + 1.
constexpr std::uint64_t kRefTag = 0;

void check_num_samples(std::int64_t num_samples) {
  if (num_samples < 100) {
    throw std::invalid_argument("num_samples must be >= 100");
  }
}

void check_n_grid(const std::vector<std::int64_t>& n_grid) {
  if (n_grid.size() < 3) {
    throw std::invalid_argument("n_grid needs at least 3 points");
  }
  for (std::size_t k = 0; k + 1 < n_grid.size(); ++k) {
    if (n_grid[k + 1] <= n_grid[k]) {
      throw std::invalid_argument("n_grid must be strictly increasing");
    }
  }
  if (n_grid.front() < 1) throw std::invalid_argument("n must be >= 1");
}

double tail_from_values(const std::vector<double>& values, double l_ref,
                        double epsilon) {
  std::int64_t hits = 0;
  for (const double v : values) {
    if (std::fabs(v - l_ref) >= epsilon) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

}  // namespace

double tail_probability(const model::SingleSiteMeasure& mu, double energy,
                        double l_ref, double epsilon, std::int64_t n,
                        std::int64_t num_samples, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  check_num_samples(num_samples);
  const std::vector<double> values =
      lyapunov::sample_exponents(mu, energy, n, num_samples, seed);
  return tail_from_values(values, l_ref, epsilon);
}

DecayFit fit_decay_from_tails(const std::vector<std::int64_t>& n_grid,
                              const std::vector<double>& tails,
                              std::int64_t num_samples) {
  if (n_grid.size() != tails.size() || n_grid.size() < 3) {
    throw std::invalid_argument("need matching n_grid and tails, >= 3 points");
  }
  int interior = 0;
  for (const double p : tails) {
    if (p > 0.0 && p < 1.0) ++interior;
  }
  if (interior < 3) {
    throw InsufficientTailError(
        "fewer than 3 tail points bounded away from 0 and 1");
  }

  const double ceiling = 1.0 / static_cast<double>(num_samples);
  std::vector<double> xs, ys;
  xs.reserve(n_grid.size());
  ys.reserve(n_grid.size());
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const double p = tails[k] > 0.0 ? tails[k] : ceiling;
    xs.push_back(static_cast<double>(n_grid[k]));
    ys.push_back(std::log(p));
  }

  const double nn = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / nn, my = sy / nn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - mx, dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  double ss_res = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ss_res += r * r;
  }
  const double r2 = syy <= 1e-30 ? 1.0 : 1.0 - ss_res / syy;

  DecayFit fit;
  fit.eta = -slope;
  fit.c = std::exp(intercept);
  fit.r2 = r2;
  fit.no_decay = fit.eta < 1e-9;
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

EnergyDecay fit_decay(const model::SingleSiteMeasure& mu, double energy,
                      double epsilon, const std::vector<std::int64_t>& n_grid,
                      std::int64_t num_samples, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  check_n_grid(n_grid);
  check_num_samples(num_samples);

  // Reference exponent at a scale long enough that its finite-n bias is
  // small against epsilon.
  const std::int64_t n_ref = 10 * n_grid.back();
  const std::int64_t ref_samples = 200;
  const lyapunov::LyapunovEstimate ref = lyapunov::estimate_lyapunov(
      mu, energy, n_ref, ref_samples, rng::derive(seed, kRefTag));

  EnergyDecay out;
  out.energy = energy;
  out.l_ref = ref.mean;
  out.tails.reserve(n_grid.size());
  std::vector<double> tails;
  tails.reserve(n_grid.size());
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const double p = tail_probability(mu, energy, ref.mean, epsilon,
                                      n_grid[k], num_samples,
                                      rng::derive(seed, k + 1));
    tails.push_back(p);
    const double se =
        std::sqrt(p * (1.0 - p) / static_cast<double>(num_samples));
    out.tails.push_back({energy, n_grid[k], epsilon, p, se, p == 0.0});
  }
  out.fit = fit_decay_from_tails(n_grid, tails, num_samples);
  return out;
}

LdtReport uniform_ldt(const model::SingleSiteMeasure& mu,
                      const std::vector<double>& e_grid, double epsilon,
                      const std::vector<std::int64_t>& n_grid,
                      std::int64_t num_samples, std::uint64_t seed) {
  if (e_grid.empty()) throw std::invalid_argument("empty energy grid");
  check_n_grid(n_grid);

  LdtReport report;
  report.energies = e_grid;
  report.epsilon = epsilon;
  report.n_grid = n_grid;
  report.eta_min = std::numeric_limits<double>::quiet_NaN();

  report.unif_bound = 0.0;
  for (const double e : e_grid) {
    for (const model::Atom& a : mu.atoms()) {
      report.unif_bound = std::max(
          report.unif_bound, transfer::opnorm(transfer::transfer_piece(a.piece, e)));
    }
  }

  for (std::size_t k = 0; k < e_grid.size(); ++k) {
    const double e = e_grid[k];
    EnergyStatus st;
    st.energy = e;
    st.certificate = furstenberg::certify_type_f(mu, e).verdict;
    st.fitted = false;
    try {
      EnergyDecay decay =
          fit_decay(mu, e, epsilon, n_grid, num_samples, rng::derive(seed, k));
      st.fitted = true;
      if (st.certificate == furstenberg::Verdict::kCertified) {
        if (std::isnan(report.eta_min) || decay.fit.eta < report.eta_min) {
          report.eta_min = decay.fit.eta;
        }
      } else {
        st.detail = "not certified: excluded from eta_min";
      }
      report.decays.push_back(std::move(decay));
    } catch (const InsufficientTailError& err) {
      st.detail = err.what();
    }
    report.status.push_back(std::move(st));
  }
  return report;
}

}  // namespace anderson::ldt
