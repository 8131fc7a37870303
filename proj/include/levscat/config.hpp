#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "levscat/errors.hpp"
#include "levscat/potential.hpp"

namespace levscat {

/// Log-spaced energy grid for the fibered S-matrix.
struct GridSpec {
  double lambda_min = 1e-4;
  double lambda_max = 400.0;
  int points = 2000;

  void validate() const {
    if (!(lambda_min > 0.0)) throw validation_error("lambda_min must be > 0");
    if (!(lambda_max > lambda_min))
      throw validation_error("lambda_max must be > lambda_min");
    if (points < 16) throw validation_error("grid.points must be >= 16");
  }

  std::vector<double> nodes() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(points));
    const double t0 = std::log(lambda_min);
    const double dt = (std::log(lambda_max) - t0) / (points - 1);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = std::exp(t0 + i * dt);
    v.front() = lambda_min;
    v.back() = lambda_max;
    return v;
  }

  double log_step() const {
    return (std::log(lambda_max) - std::log(lambda_min)) / (points - 1);
  }

  bool operator==(const GridSpec&) const = default;
};

struct ToleranceConfig {
  double quadrature = 1e-8;
  double root = 1e-10;
  double residual = 1e-2;
  double resonance = 1e-4;
  double threshold = 0.05;

  void validate() const {
    for (double v : {quadrature, root, residual, resonance, threshold})
      if (!(v > 0.0)) throw validation_error("tolerance values must be > 0");
  }

  bool operator==(const ToleranceConfig&) const = default;
};

enum class LmaxMode { automatic, fixed };

struct LmaxPolicy {
  LmaxMode mode = LmaxMode::automatic;
  int pad = 8;
  int fixed = 0;

  void validate() const {
    if (pad < 0) throw validation_error("lmax.pad must be >= 0");
    if (mode == LmaxMode::fixed && fixed < 0)
      throw validation_error("lmax.fixed must be >= 0");
  }

  /// One global truncation for the whole grid, sized by the top energy.
  int resolve(double lambda_max, double r_cut) const {
    if (mode == LmaxMode::fixed) return fixed;
    return static_cast<int>(std::ceil(std::sqrt(lambda_max) * r_cut)) + pad;
  }

  bool operator==(const LmaxPolicy&) const = default;
};

struct OutputConfig {
  std::string csv;            // per-(node, ell) phase curves
  std::string integrands_csv; // aggregate integrand table
  std::string json;           // report document

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  PotentialSpec potential;
  GridSpec grid;
  LmaxPolicy lmax;
  ToleranceConfig tol;
  OutputConfig output;

  void validate() const {
    grid.validate();
    lmax.validate();
    tol.validate();
  }
};

inline bool operator==(const PotentialSpec& a, const PotentialSpec& b) {
  return a.kind == b.kind && a.strength == b.strength && a.range == b.range &&
         a.r_cut == b.r_cut && a.beta_decay == b.beta_decay && a.c_env == b.c_env &&
         a.table_r == b.table_r && a.table_v == b.table_v &&
         a.table_path == b.table_path;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.potential == b.potential && a.grid == b.grid && a.lmax == b.lmax &&
         a.tol == b.tol && a.output == b.output;
}

namespace detail {

using json = nlohmann::ordered_json;

inline void reject_unknown(const json& obj, const std::string& scope,
                           const std::vector<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : known)
      if (it.key() == k) { ok = true; break; }
    if (!ok)
      throw parse_error("unknown key '" + scope + it.key() + "'");
  }
}

inline double get_number(const json& obj, const std::string& scope,
                         const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number())
    throw parse_error("key '" + scope + key + "' must be a number");
  return obj.at(key).get<double>();
}

inline std::string get_string(const json& obj, const std::string& scope,
                              const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string())
    throw parse_error("key '" + scope + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

/// Two-column table file: "r,V" or whitespace separated, '#' comments.
inline void load_table(const std::string& path, std::vector<double>& r,
                       std::vector<double>& v) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open table file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream ls(line);
    double rv, vv;
    if (ls >> rv >> vv) {
      r.push_back(rv);
      v.push_back(vv);
    }
  }
  if (r.empty()) throw parse_error("table file '" + path + "' holds no samples");
}

} // namespace detail

/// Parses and fully validates a run configuration document (JSON).  Unspecified
/// keys take the documented defaults; unknown keys are rejected.
inline RunConfig parse_config(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const std::exception& e) {
    throw parse_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw parse_error("config root must be an object");
  detail::reject_unknown(doc, "", {"potential", "grid", "lmax", "tol", "output"});

  RunConfig cfg;

  if (!doc.contains("potential") || !doc.at("potential").is_object())
    throw parse_error("config requires a 'potential' object");
  const auto& pot = doc.at("potential");
  detail::reject_unknown(pot, "potential.",
                         {"kind", "V0", "a", "sigma", "mu", "r_cut", "table_path",
                          "beta", "c_env"});
  const std::string kind = detail::get_string(pot, "potential.", "kind", "");
  if (kind.empty()) throw parse_error("potential.kind is required");

  auto only_keys = [&pot](std::initializer_list<const char*> allowed) {
    std::vector<std::string> known{"kind"};
    for (const char* k : allowed) known.emplace_back(k);
    detail::reject_unknown(pot, "potential.", known);
  };

  if (kind == "free") {
    only_keys({});
    cfg.potential = make_free();
  } else if (kind == "square_well") {
    only_keys({"V0", "a", "r_cut"});
    cfg.potential = make_square_well(detail::get_number(pot, "potential.", "V0", 1.0),
                                     detail::get_number(pot, "potential.", "a", 1.0),
                                     detail::get_number(pot, "potential.", "r_cut", 0.0));
  } else if (kind == "gaussian") {
    only_keys({"V0", "sigma", "r_cut"});
    cfg.potential = make_gaussian(detail::get_number(pot, "potential.", "V0", 1.0),
                                  detail::get_number(pot, "potential.", "sigma", 1.0),
                                  detail::get_number(pot, "potential.", "r_cut", 0.0));
  } else if (kind == "exponential") {
    only_keys({"V0", "mu", "r_cut"});
    cfg.potential = make_exponential(detail::get_number(pot, "potential.", "V0", 1.0),
                                     detail::get_number(pot, "potential.", "mu", 1.0),
                                     detail::get_number(pot, "potential.", "r_cut", 0.0));
  } else if (kind == "tabulated") {
    only_keys({"table_path", "beta", "c_env"});
    const std::string path = detail::get_string(pot, "potential.", "table_path", "");
    if (path.empty()) throw parse_error("potential.table_path is required for tabulated");
    std::vector<double> r, v;
    detail::load_table(path, r, v);
    cfg.potential = make_tabulated(std::move(r), std::move(v),
                                   detail::get_number(pot, "potential.", "beta", 0.0),
                                   detail::get_number(pot, "potential.", "c_env", 0.0),
                                   path);
  } else {
    throw parse_error("potential.kind '" + kind + "' is not one of "
                      "free|square_well|gaussian|exponential|tabulated");
  }

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (!g.is_object()) throw parse_error("'grid' must be an object");
    detail::reject_unknown(g, "grid.", {"lambda_min", "lambda_max", "points"});
    cfg.grid.lambda_min = detail::get_number(g, "grid.", "lambda_min", cfg.grid.lambda_min);
    cfg.grid.lambda_max = detail::get_number(g, "grid.", "lambda_max", cfg.grid.lambda_max);
    cfg.grid.points = static_cast<int>(detail::get_number(g, "grid.", "points",
                                                          cfg.grid.points));
  }
  if (!(cfg.grid.lambda_min > 0.0)) throw validation_error("lambda_min must be > 0");

  if (doc.contains("lmax")) {
    const auto& l = doc.at("lmax");
    if (!l.is_object()) throw parse_error("'lmax' must be an object");
    detail::reject_unknown(l, "lmax.", {"mode", "pad", "fixed"});
    const std::string mode = detail::get_string(l, "lmax.", "mode", "auto");
    if (mode == "auto") cfg.lmax.mode = LmaxMode::automatic;
    else if (mode == "fixed") cfg.lmax.mode = LmaxMode::fixed;
    else throw parse_error("lmax.mode must be auto|fixed");
    cfg.lmax.pad = static_cast<int>(detail::get_number(l, "lmax.", "pad", cfg.lmax.pad));
    cfg.lmax.fixed = static_cast<int>(detail::get_number(l, "lmax.", "fixed", cfg.lmax.fixed));
    if (cfg.lmax.mode == LmaxMode::fixed && !l.contains("fixed"))
      throw parse_error("lmax.mode=fixed requires lmax.fixed");
  }

  if (doc.contains("tol")) {
    const auto& t = doc.at("tol");
    if (!t.is_object()) throw parse_error("'tol' must be an object");
    detail::reject_unknown(t, "tol.",
                           {"quadrature", "root", "residual", "resonance", "threshold"});
    cfg.tol.quadrature = detail::get_number(t, "tol.", "quadrature", cfg.tol.quadrature);
    cfg.tol.root = detail::get_number(t, "tol.", "root", cfg.tol.root);
    cfg.tol.residual = detail::get_number(t, "tol.", "residual", cfg.tol.residual);
    cfg.tol.resonance = detail::get_number(t, "tol.", "resonance", cfg.tol.resonance);
    cfg.tol.threshold = detail::get_number(t, "tol.", "threshold", cfg.tol.threshold);
  }

  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    if (!o.is_object()) throw parse_error("'output' must be an object");
    detail::reject_unknown(o, "output.", {"csv", "integrands_csv", "json"});
    cfg.output.csv = detail::get_string(o, "output.", "csv", "");
    cfg.output.integrands_csv = detail::get_string(o, "output.", "integrands_csv", "");
    cfg.output.json = detail::get_string(o, "output.", "json", "");
  }

  cfg.validate();
  return cfg;
}

inline detail::json potential_to_json(const PotentialSpec& p) {
  detail::json j;
  j["kind"] = to_string(p.kind);
  switch (p.kind) {
    case PotentialKind::free: break;
    case PotentialKind::square_well:
      j["V0"] = p.strength;
      j["a"] = p.range;
      j["r_cut"] = p.r_cut;
      break;
    case PotentialKind::gaussian:
      j["V0"] = p.strength;
      j["sigma"] = p.range;
      j["r_cut"] = p.r_cut;
      break;
    case PotentialKind::exponential:
      j["V0"] = p.strength;
      j["mu"] = p.range;
      j["r_cut"] = p.r_cut;
      break;
    case PotentialKind::tabulated:
      j["table_path"] = p.table_path;
      j["beta"] = p.beta_decay;
      j["c_env"] = p.c_env;
      break;
  }
  return j;
}

/// Serializes a RunConfig so that parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& cfg) {
  detail::json j;
  j["potential"] = potential_to_json(cfg.potential);
  j["grid"] = {{"lambda_min", cfg.grid.lambda_min},
               {"lambda_max", cfg.grid.lambda_max},
               {"points", cfg.grid.points}};
  j["lmax"] = detail::json::object();
  j["lmax"]["mode"] = (cfg.lmax.mode == LmaxMode::automatic) ? "auto" : "fixed";
  j["lmax"]["pad"] = cfg.lmax.pad;
  if (cfg.lmax.mode == LmaxMode::fixed) j["lmax"]["fixed"] = cfg.lmax.fixed;
  j["tol"] = {{"quadrature", cfg.tol.quadrature},
              {"root", cfg.tol.root},
              {"residual", cfg.tol.residual},
              {"resonance", cfg.tol.resonance},
              {"threshold", cfg.tol.threshold}};
  j["output"] = {{"csv", cfg.output.csv},
                 {"integrands_csv", cfg.output.integrands_csv},
                 {"json", cfg.output.json}};
  return j.dump(2) + "\n";
}

/// Applies a dotted-key override (e.g. "grid.points=4000") by rewriting the
/// document and revalidating through the single parse path.
inline std::string apply_override(const std::string& text, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw parse_error("override must look like section.key=value: '" + kv + "'");
  const std::string dotted = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const std::exception& e) {
    throw parse_error(std::string("config is not valid JSON: ") + e.what());
  }
  detail::json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = dotted.find('.', pos);
    const std::string part = dotted.substr(pos, dot - pos);
    if (part.empty()) throw parse_error("bad override key '" + dotted + "'");
    if (dot == std::string::npos) {
      detail::json parsed;
      try {
        parsed = detail::json::parse(value);
      } catch (...) {
        parsed = value; // bare strings allowed
      }
      (*node)[part] = parsed;
      break;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
  return doc.dump();
}

} // namespace levscat
