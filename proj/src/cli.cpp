#include "anderson1d/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "anderson1d/csv.hpp"
#include "anderson1d/errors.hpp"
#include "anderson1d/furstenberg.hpp"
#include "anderson1d/kernels.hpp"
#include "anderson1d/ldt.hpp"
#include "anderson1d/lyapunov.hpp"
#include "anderson1d/parallel.hpp"
#include "anderson1d/version.hpp"

namespace anderson::cli {

using nlohmann::ordered_json;

namespace {

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> xs(points);
  if (points == 1) {
    xs[0] = lo;
    return xs;
  }
  for (int k = 0; k < points; ++k) {
    xs[k] = lo + (hi - lo) * static_cast<double>(k) /
                     static_cast<double>(points - 1);
  }
  return xs;
}

void run_check_nc(const ExperimentConfig& cfg,
                  const model::SingleSiteMeasure& mu,
                  const std::string& prefix, RunResult& result) {
  const model::NcReport report = model::check_nontriviality(mu, cfg.nc.tol_val);
  CsvWriter csv(prefix + "nc.csv",
                {"holds", "witness_i", "witness_j", "disagreement_measure"});
  csv.write_row({fmt(report.holds),
                 report.witness_pair
                     ? fmt(static_cast<std::int64_t>(report.witness_pair->first))
                     : "",
                 report.witness_pair
                     ? fmt(static_cast<std::int64_t>(report.witness_pair->second))
                     : "",
                 fmt(report.disagreement_measure)});
  result.files.push_back(csv.path());
  if (!report.holds) {
    result.warnings.push_back("NC fails: all star products commute");
    result.exit_code = kExitDegenerate;
  }
}

void run_sweep_lyapunov(const ExperimentConfig& cfg,
                        const model::SingleSiteMeasure& mu,
                        const std::string& prefix, RunResult& result) {
  const std::vector<double> grid =
      linspace(cfg.lyapunov.e_lo, cfg.lyapunov.e_hi, cfg.lyapunov.e_points);
  const auto estimates = lyapunov::sweep_lyapunov(
      mu, grid, cfg.lyapunov.n, cfg.lyapunov.samples, cfg.seed);
  CsvWriter csv(prefix + "lyapunov.csv",
                {"energy", "n", "num_samples", "mean", "std_error", "seed"});
  for (const auto& e : estimates) {
    csv.write_row({fmt(e.energy), fmt(e.n), fmt(e.num_samples), fmt(e.mean),
                   fmt(e.std_error), fmt(e.seed)});
  }
  result.files.push_back(csv.path());
}

void run_certify(const ExperimentConfig& cfg,
                 const model::SingleSiteMeasure& mu, const std::string& prefix,
                 RunResult& result) {
  furstenberg::CertifyOptions opt;
  opt.tol_c_rel = cfg.certify.tol_c;
  opt.tol_t = cfg.certify.tol_t;
  opt.k_max = cfg.certify.k_max;

  CsvWriter csv(prefix + "certificates.csv",
                {"energy", "pair_i", "pair_j", "commutator_det", "trace_a",
                 "trace_b", "tol_c_abs", "tol_t", "witness", "witness_trace",
                 "verdict", "note"});
  bool any_positive = false;
  for (const double e : cfg.certify.e_grid) {
    const auto cert = furstenberg::certify_type_f(mu, e, opt);
    if (cert.verdict != furstenberg::Verdict::kNotCertified) {
      any_positive = true;
    }
    csv.write_row(
        {fmt(e), fmt(static_cast<std::int64_t>(cert.pair.first)),
         fmt(static_cast<std::int64_t>(cert.pair.second)),
         fmt(cert.commutator_det), fmt(cert.trace_a), fmt(cert.trace_b),
         fmt(cert.tol_c_abs), fmt(cert.tol_t),
         cert.non_elliptic_witness
             ? furstenberg::witness_to_string(*cert.non_elliptic_witness)
             : "",
         fmt(cert.witness_trace), furstenberg::to_string(cert.verdict),
         cert.note});
  }
  result.files.push_back(csv.path());
  if (!any_positive) {
    result.warnings.push_back("NOT_CERTIFIED at every grid energy");
    result.exit_code = kExitDegenerate;
  }
}

void run_find_discrete_set(const ExperimentConfig& cfg,
                           const model::SingleSiteMeasure& mu,
                           const std::string& prefix, RunResult& result) {
  const auto scan = furstenberg::find_discrete_set(
      mu, {cfg.discrete_set.pair_i, cfg.discrete_set.pair_j},
      cfg.discrete_set.e_lo, cfg.discrete_set.e_hi,
      cfg.discrete_set.grid_points, cfg.discrete_set.tol);
  CsvWriter csv(prefix + "discrete_set.csv", {"energy", "source"});
  for (const auto& r : scan.roots) {
    csv.write_row({fmt(r.energy), furstenberg::to_string(r.source)});
  }
  result.files.push_back(csv.path());
  for (const std::string& w : scan.warnings) result.warnings.push_back(w);
  for (const bool z : scan.identically_zero) {
    if (z) result.exit_code = kExitDegenerate;
  }
}

void run_ldt(const ExperimentConfig& cfg, const model::SingleSiteMeasure& mu,
             const std::string& prefix, RunResult& result) {
  const auto report = ldt::uniform_ldt(mu, cfg.ldt.e_grid, cfg.ldt.epsilon,
                                       cfg.ldt.n_grid, cfg.ldt.samples,
                                       cfg.seed);
  CsvWriter tails(prefix + "ldt_tails.csv",
                  {"energy", "n", "epsilon", "tail", "tail_stderr", "ceiled"});
  for (const auto& d : report.decays) {
    for (const auto& t : d.tails) {
      tails.write_row({fmt(t.energy), fmt(t.n), fmt(t.epsilon), fmt(t.tail),
                       fmt(t.tail_stderr), fmt(t.ceiled)});
    }
  }
  result.files.push_back(tails.path());

  CsvWriter summary(prefix + "ldt_summary.csv",
                    {"energy", "L_ref", "eta", "C", "r2", "certificate",
                     "status"});
  std::size_t decay_idx = 0;
  for (const auto& st : report.status) {
    if (st.fitted) {
      const auto& d = report.decays[decay_idx++];
      summary.write_row({fmt(st.energy), fmt(d.l_ref), fmt(d.fit.eta),
                         fmt(d.fit.c), fmt(d.fit.r2),
                         furstenberg::to_string(st.certificate),
                         d.fit.no_decay ? "NoDecay" : "ok"});
    } else {
      summary.write_row({fmt(st.energy), "", "", "", "",
                         furstenberg::to_string(st.certificate), st.detail});
      result.warnings.push_back("energy " + fmt(st.energy) + ": " + st.detail);
    }
    if (st.certificate != furstenberg::Verdict::kCertified) {
      result.warnings.push_back("energy " + fmt(st.energy) +
                                " is not CERTIFIED; excluded from eta_min");
    }
  }
  result.files.push_back(summary.path());

  CsvWriter uniform(prefix + "ldt_uniform.csv",
                    {"eta_min", "unif_bound", "epsilon", "num_energies"});
  uniform.write_row({fmt(report.eta_min), fmt(report.unif_bound),
                     fmt(report.epsilon),
                     fmt(static_cast<std::int64_t>(report.energies.size()))});
  result.files.push_back(uniform.path());

  if (std::isnan(report.eta_min)) {
    result.warnings.push_back("no certified energy produced a decay fit");
    result.exit_code = kExitDegenerate;
  }
}

void run_borg_marchenko(const ExperimentConfig& cfg,
                        const model::SingleSiteMeasure& mu,
                        const std::string& prefix, RunResult& result) {
  model::Piece f1 = cfg.borg_marchenko.piece1
                        ? model::Piece(*cfg.borg_marchenko.piece1)
                        : mu.atoms().at(0).piece;
  model::Piece f2 = cfg.borg_marchenko.piece2
                        ? model::Piece(*cfg.borg_marchenko.piece2)
                        : (mu.num_atoms() > 1 ? mu.atoms().at(1).piece
                                              : mu.atoms().at(0).piece);

  std::vector<std::complex<double>> energies;
  {
    const auto all = furstenberg::default_probe_energies(f1, f2);
    for (int j = 0; j < cfg.borg_marchenko.n_real && j < 20; ++j) {
      energies.push_back(all[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < cfg.borg_marchenko.n_imag && j < 20; ++j) {
      energies.push_back(all[static_cast<std::size_t>(20 + j)]);
    }
  }

  const auto bm = furstenberg::borg_marchenko_check(f1, f2, energies);
  CsvWriter csv(prefix + "borg_marchenko.csv",
                {"e_re", "e_im", "matrix_gap", "m_gap"});
  for (const auto& row : bm.rows) {
    csv.write_row({fmt(row.energy.real()), fmt(row.energy.imag()),
                   fmt(row.matrix_gap), fmt(row.m_gap)});
  }
  result.files.push_back(csv.path());

  CsvWriter summary(prefix + "borg_marchenko_summary.csv",
                    {"distinct", "max_matrix_gap", "max_m_gap"});
  summary.write_row({fmt(bm.distinct), fmt(bm.max_matrix_gap), fmt(bm.max_m_gap)});
  result.files.push_back(summary.path());
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> kNames = {
      "check-nc",          "sweep-lyapunov", "certify",
      "find-discrete-set", "ldt",            "borg-marchenko"};
  return kNames;
}

RunResult run_subcommand(const std::string& name,
                         const ExperimentConfig& cfg,
                         const std::string& out_prefix) {
  const auto t0 = std::chrono::steady_clock::now();

  const std::filesystem::path parent =
      std::filesystem::path(out_prefix).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);

  const model::SingleSiteMeasure mu = make_measure(cfg);

  RunResult result;
  if (name == "check-nc") {
    run_check_nc(cfg, mu, out_prefix, result);
  } else if (name == "sweep-lyapunov") {
    run_sweep_lyapunov(cfg, mu, out_prefix, result);
  } else if (name == "certify") {
    run_certify(cfg, mu, out_prefix, result);
  } else if (name == "find-discrete-set") {
    run_find_discrete_set(cfg, mu, out_prefix, result);
  } else if (name == "ldt") {
    run_ldt(cfg, mu, out_prefix, result);
  } else if (name == "borg-marchenko") {
    run_borg_marchenko(cfg, mu, out_prefix, result);
  } else {
    throw std::invalid_argument("unknown subcommand '" + name + "'");
  }

  const double wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  // The manifest makes every CSV reproducible: it echoes the full effective
  // config (defaults applied) plus the seed. Wall time and kernel name are
  // environment notes, which is why the manifest itself is not covered by
  // the byte-determinism guarantee.
  ordered_json manifest;
  manifest["tool"] = "anderson1d";
  manifest["version"] = kVersion;
  manifest["subcommand"] = name;
  manifest["seed"] = cfg.seed;
  manifest["config"] = ordered_json::parse(emit_config(cfg));
  manifest["model_l2_bound"] = mu.l2_bound();
  manifest["files"] = result.files;
  manifest["warnings"] = result.warnings;
  manifest["exit_code"] = result.exit_code;
  manifest["environment"] = {{"kernel", kernels::active_kernel_name()},
                             {"threads_hint", par::max_threads()}};
  manifest["wall_time_s"] = wall_s;

  const std::string manifest_path = out_prefix + "manifest.json";
  std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
  if (!mf) throw std::runtime_error("cannot open " + manifest_path);
  mf << manifest.dump(2) << "\n";
  result.files.push_back(manifest_path);

  return result;
}

}  // namespace anderson::cli
