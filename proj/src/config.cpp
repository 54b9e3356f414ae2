#include "anderson1d/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "anderson1d/errors.hpp"

namespace anderson::cli {

using nlohmann::ordered_json;

namespace {

// Compact number formatting for error messages ("1.1", not "1.100000").
std::string num_str(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ConfigError(path, reason);
}

void require_keys(const ordered_json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) fail(path, "unknown key '" + key + "'");
  }
}

double get_number(const ordered_json& obj, const std::string& path,
                  const char* key, double fallback, bool* present = nullptr) {
  if (!obj.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const ordered_json& obj, const std::string& path,
                     const char* key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::vector<model::Segment> parse_segments(const ordered_json& arr,
                                           const std::string& path) {
  if (!arr.is_array() || arr.empty()) {
    fail(path, "expected a nonempty array of [value, length] pairs");
  }
  std::vector<model::Segment> segments;
  segments.reserve(arr.size());
  for (std::size_t s = 0; s < arr.size(); ++s) {
    const auto& seg = arr.at(s);
    const std::string seg_path = path + "[" + std::to_string(s) + "]";
    if (!seg.is_array() || seg.size() != 2 || !seg.at(0).is_number() ||
        !seg.at(1).is_number()) {
      fail(seg_path, "expected [value, length]");
    }
    const double value = seg.at(0).get<double>();
    const double length = seg.at(1).get<double>();
    if (!(length > 0.0)) {
      fail(seg_path, "length " + num_str(length) + " is not positive");
    }
    segments.push_back({value, length});
  }
  return segments;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    fail("", std::string("not valid JSON: ") + err.what());
  }

  require_keys(root, "config",
               {"delta", "m", "atoms", "seed", "lyapunov", "ldt", "certify",
                "discrete_set", "nc", "borg_marchenko"});

  ExperimentConfig cfg;

  if (!root.contains("delta")) fail("delta", "required");
  if (!root.contains("m")) fail("m", "required");
  if (!root.contains("atoms")) fail("atoms", "required");
  cfg.delta = get_number(root, "config", "delta", 0.0);
  cfg.m = get_number(root, "config", "m", 0.0);
  if (!(cfg.delta > 0.0)) fail("delta", "must be > 0");
  if (!(cfg.m >= cfg.delta)) fail("m", "must be >= delta");

  const auto& atoms = root.at("atoms");
  if (!atoms.is_array() || atoms.empty()) {
    fail("atoms", "expected a nonempty array");
  }
  double prob_sum = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::string path = "atoms[" + std::to_string(k) + "]";
    const auto& atom = atoms.at(k);
    require_keys(atom, path, {"prob", "segments"});
    if (!atom.contains("prob") || !atom.at("prob").is_number()) {
      fail(path + ".prob", "required number");
    }
    if (!atom.contains("segments")) fail(path + ".segments", "required");
    AtomSpec spec;
    spec.prob = atom.at("prob").get<double>();
    if (!(spec.prob > 0.0) || spec.prob > 1.0) {
      fail(path + ".prob", "must lie in (0, 1]");
    }
    spec.segments = parse_segments(atom.at("segments"), path + ".segments");
    double len = 0.0;
    for (const model::Segment& s : spec.segments) len += s.length;
    const double slack = 1e-12 * std::max(1.0, cfg.m);
    if (len < cfg.delta - slack || len > cfg.m + slack) {
      fail(path, "total length " + num_str(len) + " outside [delta, m] = [" +
                     num_str(cfg.delta) + ", " + num_str(cfg.m) + "]");
    }
    prob_sum += spec.prob;
    cfg.atoms.push_back(std::move(spec));
  }
  if (std::fabs(prob_sum - 1.0) > 1e-12) {
    fail("atoms", "probabilities sum to " + num_str(prob_sum));
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_integer()) fail("seed", "expected integer");
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }

  if (root.contains("lyapunov")) {
    const auto& b = root.at("lyapunov");
    require_keys(b, "lyapunov", {"e_lo", "e_hi", "e_points", "n", "samples"});
    cfg.lyapunov.e_lo = get_number(b, "lyapunov", "e_lo", cfg.lyapunov.e_lo);
    cfg.lyapunov.e_hi = get_number(b, "lyapunov", "e_hi", cfg.lyapunov.e_hi);
    cfg.lyapunov.e_points = static_cast<int>(
        get_int(b, "lyapunov", "e_points", cfg.lyapunov.e_points));
    cfg.lyapunov.n = get_int(b, "lyapunov", "n", cfg.lyapunov.n);
    cfg.lyapunov.samples = get_int(b, "lyapunov", "samples", cfg.lyapunov.samples);
    if (!(cfg.lyapunov.e_lo <= cfg.lyapunov.e_hi)) {
      fail("lyapunov", "need e_lo <= e_hi");
    }
    if (cfg.lyapunov.e_points < 1) fail("lyapunov.e_points", "must be >= 1");
    if (cfg.lyapunov.n < 1) fail("lyapunov.n", "must be >= 1");
    if (cfg.lyapunov.samples < 1) fail("lyapunov.samples", "must be >= 1");
  }

  if (root.contains("ldt")) {
    const auto& b = root.at("ldt");
    require_keys(b, "ldt", {"epsilon", "n_grid", "samples", "e_grid"});
    cfg.ldt.epsilon = get_number(b, "ldt", "epsilon", cfg.ldt.epsilon);
    if (!(cfg.ldt.epsilon > 0.0)) fail("ldt.epsilon", "must be > 0");
    if (b.contains("n_grid")) {
      const auto& g = b.at("n_grid");
      if (!g.is_array() || g.size() < 3) {
        fail("ldt.n_grid", "expected an array of >= 3 integers");
      }
      cfg.ldt.n_grid.clear();
      for (const auto& v : g) {
        if (!v.is_number_integer()) fail("ldt.n_grid", "expected integers");
        cfg.ldt.n_grid.push_back(v.get<std::int64_t>());
      }
      for (std::size_t k = 0; k + 1 < cfg.ldt.n_grid.size(); ++k) {
        if (cfg.ldt.n_grid[k + 1] <= cfg.ldt.n_grid[k]) {
          fail("ldt.n_grid", "must be strictly increasing");
        }
      }
      if (cfg.ldt.n_grid.front() < 1) fail("ldt.n_grid", "entries must be >= 1");
    }
    cfg.ldt.samples = get_int(b, "ldt", "samples", cfg.ldt.samples);
    if (cfg.ldt.samples < 100) fail("ldt.samples", "must be >= 100");
    if (b.contains("e_grid")) {
      const auto& g = b.at("e_grid");
      if (!g.is_array() || g.empty()) {
        fail("ldt.e_grid", "expected a nonempty array of numbers");
      }
      cfg.ldt.e_grid.clear();
      for (const auto& v : g) {
        if (!v.is_number()) fail("ldt.e_grid", "expected numbers");
        cfg.ldt.e_grid.push_back(v.get<double>());
      }
    }
  }

  if (root.contains("certify")) {
    const auto& b = root.at("certify");
    require_keys(b, "certify", {"e_grid", "tol_c", "tol_t", "k_max"});
    if (b.contains("e_grid")) {
      const auto& g = b.at("e_grid");
      if (!g.is_array() || g.empty()) {
        fail("certify.e_grid", "expected a nonempty array of numbers");
      }
      cfg.certify.e_grid.clear();
      for (const auto& v : g) {
        if (!v.is_number()) fail("certify.e_grid", "expected numbers");
        cfg.certify.e_grid.push_back(v.get<double>());
      }
    }
    cfg.certify.tol_c = get_number(b, "certify", "tol_c", cfg.certify.tol_c);
    cfg.certify.tol_t = get_number(b, "certify", "tol_t", cfg.certify.tol_t);
    cfg.certify.k_max =
        static_cast<int>(get_int(b, "certify", "k_max", cfg.certify.k_max));
    if (!(cfg.certify.tol_c > 0.0)) fail("certify.tol_c", "must be > 0");
    if (!(cfg.certify.tol_t > 0.0)) fail("certify.tol_t", "must be > 0");
    if (cfg.certify.k_max < 1 || cfg.certify.k_max > 16) {
      fail("certify.k_max", "must lie in [1, 16]");
    }
  }

  if (root.contains("discrete_set")) {
    const auto& b = root.at("discrete_set");
    require_keys(b, "discrete_set",
                 {"e_lo", "e_hi", "grid_points", "tol", "pair_i", "pair_j"});
    cfg.discrete_set.e_lo =
        get_number(b, "discrete_set", "e_lo", cfg.discrete_set.e_lo);
    cfg.discrete_set.e_hi =
        get_number(b, "discrete_set", "e_hi", cfg.discrete_set.e_hi);
    cfg.discrete_set.grid_points = static_cast<int>(
        get_int(b, "discrete_set", "grid_points", cfg.discrete_set.grid_points));
    cfg.discrete_set.tol = get_number(b, "discrete_set", "tol", cfg.discrete_set.tol);
    cfg.discrete_set.pair_i = static_cast<std::size_t>(
        get_int(b, "discrete_set", "pair_i", 0));
    cfg.discrete_set.pair_j = static_cast<std::size_t>(
        get_int(b, "discrete_set", "pair_j", 1));
    if (!(cfg.discrete_set.e_lo < cfg.discrete_set.e_hi)) {
      fail("discrete_set", "need e_lo < e_hi");
    }
    if (cfg.discrete_set.grid_points < 2) {
      fail("discrete_set.grid_points", "must be >= 2");
    }
    if (!(cfg.discrete_set.tol > 0.0)) fail("discrete_set.tol", "must be > 0");
  }

  if (root.contains("nc")) {
    const auto& b = root.at("nc");
    require_keys(b, "nc", {"tol_val"});
    cfg.nc.tol_val = get_number(b, "nc", "tol_val", cfg.nc.tol_val);
    if (cfg.nc.tol_val < 0.0) fail("nc.tol_val", "must be >= 0");
  }

  if (root.contains("borg_marchenko")) {
    const auto& b = root.at("borg_marchenko");
    require_keys(b, "borg_marchenko", {"piece1", "piece2", "n_real", "n_imag"});
    if (b.contains("piece1")) {
      cfg.borg_marchenko.piece1 =
          parse_segments(b.at("piece1"), "borg_marchenko.piece1");
    }
    if (b.contains("piece2")) {
      cfg.borg_marchenko.piece2 =
          parse_segments(b.at("piece2"), "borg_marchenko.piece2");
    }
    cfg.borg_marchenko.n_real = static_cast<int>(
        get_int(b, "borg_marchenko", "n_real", cfg.borg_marchenko.n_real));
    cfg.borg_marchenko.n_imag = static_cast<int>(
        get_int(b, "borg_marchenko", "n_imag", cfg.borg_marchenko.n_imag));
    if (cfg.borg_marchenko.n_real < 0 || cfg.borg_marchenko.n_imag < 0 ||
        cfg.borg_marchenko.n_real + cfg.borg_marchenko.n_imag < 1) {
      fail("borg_marchenko", "need at least one probe energy");
    }
  }

  return cfg;
}

namespace {

ordered_json segments_json(const std::vector<model::Segment>& segments) {
  ordered_json arr = ordered_json::array();
  for (const model::Segment& s : segments) {
    arr.push_back(ordered_json::array({s.value, s.length}));
  }
  return arr;
}

}  // namespace

std::string emit_config(const ExperimentConfig& c) {
  ordered_json root;
  root["delta"] = c.delta;
  root["m"] = c.m;
  root["atoms"] = ordered_json::array();
  for (const AtomSpec& a : c.atoms) {
    ordered_json atom;
    atom["prob"] = a.prob;
    atom["segments"] = segments_json(a.segments);
    root["atoms"].push_back(std::move(atom));
  }
  root["seed"] = c.seed;
  root["lyapunov"] = {{"e_lo", c.lyapunov.e_lo},
                      {"e_hi", c.lyapunov.e_hi},
                      {"e_points", c.lyapunov.e_points},
                      {"n", c.lyapunov.n},
                      {"samples", c.lyapunov.samples}};
  root["ldt"] = {{"epsilon", c.ldt.epsilon},
                 {"n_grid", c.ldt.n_grid},
                 {"samples", c.ldt.samples},
                 {"e_grid", c.ldt.e_grid}};
  root["certify"] = {{"e_grid", c.certify.e_grid},
                     {"tol_c", c.certify.tol_c},
                     {"tol_t", c.certify.tol_t},
                     {"k_max", c.certify.k_max}};
  root["discrete_set"] = {{"e_lo", c.discrete_set.e_lo},
                          {"e_hi", c.discrete_set.e_hi},
                          {"grid_points", c.discrete_set.grid_points},
                          {"tol", c.discrete_set.tol},
                          {"pair_i", c.discrete_set.pair_i},
                          {"pair_j", c.discrete_set.pair_j}};
  root["nc"] = {{"tol_val", c.nc.tol_val}};
  ordered_json bm;
  if (c.borg_marchenko.piece1) bm["piece1"] = segments_json(*c.borg_marchenko.piece1);
  if (c.borg_marchenko.piece2) bm["piece2"] = segments_json(*c.borg_marchenko.piece2);
  bm["n_real"] = c.borg_marchenko.n_real;
  bm["n_imag"] = c.borg_marchenko.n_imag;
  root["borg_marchenko"] = std::move(bm);
  return root.dump(2) + "\n";
}

model::SingleSiteMeasure make_measure(const ExperimentConfig& c) {
  std::vector<model::Atom> atoms;
  atoms.reserve(c.atoms.size());
  for (const AtomSpec& a : c.atoms) {
    atoms.push_back({model::Piece(a.segments), a.prob});
  }
  return model::SingleSiteMeasure(std::move(atoms), c.delta, c.m);
}

}  // namespace anderson::cli
