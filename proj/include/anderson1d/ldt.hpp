#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anderson1d/furstenberg.hpp"
#include "anderson1d/model.hpp"

namespace anderson::ldt {

struct TailPoint {
  double energy;
  std::int64_t n;
  double epsilon;
  double tail;         // empirical P(|log||A_n||/n - L_ref| >= epsilon)
  double tail_stderr;  // binomial standard error sqrt(p(1-p)/S)
  bool ceiled;         // true when tail was 0 and replaced by 1/S for fitting
};

/// Fraction of num_samples words of length n whose finite-scale exponent
/// deviates from L_ref by at least epsilon. Same (mu, E, n, seed) shares
/// the same words across different epsilon values, so deviation events nest
/// exactly.
double tail_probability(const model::SingleSiteMeasure& mu, double energy,
                        double l_ref, double epsilon, std::int64_t n,
                        std::int64_t num_samples, std::uint64_t seed);

struct DecayFit {
  double c;    // fitted prefactor, tails ~ c * exp(-eta * n)
  double eta;  // fitted decay rate (-slope of log tail vs n)
  double r2;
  bool no_decay;    // slope indistinguishable from zero
  int points_used;  // grid points entering the fit
};

/// Least-squares line fit of log(tail) against n. Tail values of exactly
/// zero are replaced by the 1/num_samples resolution ceiling (the caller
/// sees them flagged). Throws InsufficientTailError when fewer than three
/// grid points have tails strictly inside (0, 1).
DecayFit fit_decay_from_tails(const std::vector<std::int64_t>& n_grid,
                              const std::vector<double>& tails,
                              std::int64_t num_samples);

struct EnergyDecay {
  double energy;
  double l_ref;
  DecayFit fit;
  std::vector<TailPoint> tails;
};

/// Measures tails over n_grid at one energy and fits the decay rate.
/// L_ref comes from an internal high-accuracy run at 10 x max(n_grid).
EnergyDecay fit_decay(const model::SingleSiteMeasure& mu, double energy,
                      double epsilon, const std::vector<std::int64_t>& n_grid,
                      std::int64_t num_samples, std::uint64_t seed);

struct EnergyStatus {
  double energy;
  furstenberg::Verdict certificate;
  bool fitted;
  std::string detail;  // failure reason when not fitted
};

struct LdtReport {
  std::vector<double> energies;
  double epsilon;
  std::vector<std::int64_t> n_grid;
  std::vector<EnergyDecay> decays;    // only the fitted energies
  std::vector<EnergyStatus> status;   // one per grid energy, input order
  double eta_min;                     // over certified + fitted energies; NaN if none
  double unif_bound;                  // max over atoms and grid energies of ||A^E(atom)||
};

/// Per-energy decay fits over a compact energy grid plus the uniform
/// summary: eta_min over the certified energies and the explicit
/// norm bound that plays the role of the uniform cocycle constant.
/// Energies whose certificate is not CERTIFIED are still measured but
/// marked and excluded from eta_min.
LdtReport uniform_ldt(const model::SingleSiteMeasure& mu,
                      const std::vector<double>& e_grid, double epsilon,
                      const std::vector<std::int64_t>& n_grid,
                      std::int64_t num_samples, std::uint64_t seed);

}  // namespace anderson::ldt
