#include "alab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace alab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string_view to_string(Preconditioner p) {
  return p == Preconditioner::diagonal ? "diagonal" : "none";
}

Preconditioner preconditioner_from_string(const std::string& s) {
  if (s == "diagonal") return Preconditioner::diagonal;
  if (s == "none") return Preconditioner::none;
  throw ConfigError("unknown preconditioner '" + s + "'");
}

ordered_json fit_to_json(const FitWindow& f) {
  return ordered_json{{"r_min", f.r_min},         {"r_max", f.r_max},
                      {"slope_lo", f.slope_lo},   {"slope_hi", f.slope_hi},
                      {"min_r_squared", f.min_r_squared}, {"enforce", f.enforce},
                      {"orders", f.orders}};
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.contains(k)) throw ConfigError("unknown config key '" + where + k + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + where + key + "': " + e.what());
  }
}

FitWindow fit_from_json(const json& j, FitWindow f, const std::string& where) {
  check_keys(j, where, {"r_min", "r_max", "slope_lo", "slope_hi", "min_r_squared", "enforce",
                       "orders"});
  read(j, "r_min", f.r_min, where);
  read(j, "r_max", f.r_max, where);
  read(j, "slope_lo", f.slope_lo, where);
  read(j, "slope_hi", f.slope_hi, where);
  read(j, "min_r_squared", f.min_r_squared, where);
  read(j, "enforce", f.enforce, where);
  read(j, "orders", f.orders, where);
  return f;
}

}  // namespace

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["lattice"] = {{"d", c.d}, {"L", c.L}};
  j["ensemble"] = {{"kind", std::string(to_string(c.ensemble.kind))},
                   {"lambda", c.ensemble.lambda},
                   {"constant", c.ensemble.constant},
                   {"p", c.ensemble.p}};
  j["seed"] = c.ensemble.seed;
  if (c.T)
    j["T"] = *c.T;
  else
    j["T"] = nullptr;
  j["solver"] = {{"rel_tol", c.solver.rel_tol},
                 {"max_iter", c.solver.max_iter},
                 {"preconditioner", std::string(to_string(c.solver.preconditioner))}};
  j["samples"] = c.samples;
  j["radii"] = c.radii;
  j["moment_orders"] = c.moment_orders;
  j["out"] = c.out;
  j["identities"] = {{"instances", c.identity_instances}};
  j["quenched"] = {{"mixed_radii", c.quenched_mixed_radii},
                   {"band_threshold", c.band_threshold},
                   {"max_ball_vertices", c.max_ball_vertices}};
  j["annealed"] = {{"mixed", c.annealed_mixed},
                   {"mixed_radii", c.mixed_radii},
                   {"gradient_fit", fit_to_json(c.gradient_fit)},
                   {"mixed_fit", fit_to_json(c.mixed_fit)}};
  j["solve"] = {{"sample_index", c.sample_index}};
  j["fit"] = {{"input", c.fit_input}};
  return j;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  check_keys(j, "", {"schema_version", "lattice", "ensemble", "seed", "T", "solver", "samples",
                     "radii", "moment_orders", "out", "identities", "quenched", "annealed",
                     "solve", "fit"});
  if (j.contains("schema_version") && j.at("schema_version") != kConfigSchemaVersion)
    throw ConfigError("unsupported config schema_version");
  if (j.contains("lattice")) {
    const json& l = j.at("lattice");
    check_keys(l, "lattice.", {"d", "L"});
    read(l, "d", c.d, "lattice.");
    read(l, "L", c.L, "lattice.");
  }
  if (j.contains("ensemble")) {
    const json& e = j.at("ensemble");
    check_keys(e, "ensemble.", {"kind", "lambda", "constant", "p"});
    std::string kind(to_string(c.ensemble.kind));
    read(e, "kind", kind, "ensemble.");
    c.ensemble.kind = ensemble_kind_from_string(kind);
    read(e, "lambda", c.ensemble.lambda, "ensemble.");
    read(e, "constant", c.ensemble.constant, "ensemble.");
    read(e, "p", c.ensemble.p, "ensemble.");
  }
  read(j, "seed", c.ensemble.seed, "");
  if (j.contains("T")) {
    if (j.at("T").is_null()) {
      c.T.reset();
    } else {
      double t = 0.0;
      read(j, "T", t, "");
      c.T = t;
    }
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, "solver.", {"rel_tol", "max_iter", "preconditioner"});
    read(s, "rel_tol", c.solver.rel_tol, "solver.");
    read(s, "max_iter", c.solver.max_iter, "solver.");
    std::string pre(to_string(c.solver.preconditioner));
    read(s, "preconditioner", pre, "solver.");
    c.solver.preconditioner = preconditioner_from_string(pre);
  }
  read(j, "samples", c.samples, "");
  read(j, "radii", c.radii, "");
  read(j, "moment_orders", c.moment_orders, "");
  read(j, "out", c.out, "");
  if (j.contains("identities")) {
    const json& s = j.at("identities");
    check_keys(s, "identities.", {"instances"});
    read(s, "instances", c.identity_instances, "identities.");
  }
  if (j.contains("quenched")) {
    const json& s = j.at("quenched");
    check_keys(s, "quenched.", {"mixed_radii", "band_threshold", "max_ball_vertices"});
    read(s, "mixed_radii", c.quenched_mixed_radii, "quenched.");
    read(s, "band_threshold", c.band_threshold, "quenched.");
    read(s, "max_ball_vertices", c.max_ball_vertices, "quenched.");
  }
  if (j.contains("annealed")) {
    const json& s = j.at("annealed");
    check_keys(s, "annealed.", {"mixed", "mixed_radii", "gradient_fit", "mixed_fit"});
    read(s, "mixed", c.annealed_mixed, "annealed.");
    read(s, "mixed_radii", c.mixed_radii, "annealed.");
    if (s.contains("gradient_fit"))
      c.gradient_fit = fit_from_json(s.at("gradient_fit"), c.gradient_fit, "annealed.gradient_fit.");
    if (s.contains("mixed_fit"))
      c.mixed_fit = fit_from_json(s.at("mixed_fit"), c.mixed_fit, "annealed.mixed_fit.");
  }
  if (j.contains("solve")) {
    const json& s = j.at("solve");
    check_keys(s, "solve.", {"sample_index"});
    read(s, "sample_index", c.sample_index, "solve.");
  }
  if (j.contains("fit")) {
    const json& s = j.at("fit");
    check_keys(s, "fit.", {"input"});
    read(s, "input", c.fit_input, "fit.");
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config file " + path + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

std::vector<std::string> preset_names() {
  return {"accept-d2", "accept-d3", "constant-d2", "constant-d3", "tiny-ring"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "accept-d2") {
    c.d = 2;
    c.L = 128;
    c.T = 1024.0;
    c.ensemble = {EnsembleKind::iid_bernoulli, 0.25, 1.0, 0.5, 20131001};
    c.samples = 200;
    c.radii = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    c.mixed_radii = c.radii;
    c.gradient_fit = {4.0, 16.0, -1.25, -0.75, 0.9, true, {2}};
    c.mixed_fit = {4.0, 16.0, -2.4, -1.6, 0.0, true, {1}};
    c.out = "out-accept-d2";
  } else if (name == "accept-d3") {
    c.d = 3;
    c.L = 64;
    c.T = 256.0;
    c.ensemble = {EnsembleKind::iid_uniform, 0.25, 1.0, 0.5, 20131002};
    c.samples = 10;
    c.radii = {2.0, 4.0, 8.0};
    c.band_threshold = 4.0;
    c.out = "out-accept-d3";
  } else if (name == "constant-d2") {
    c.d = 2;
    c.L = 64;
    c.ensemble = {EnsembleKind::constant, 0.25, 1.0, 0.5, 1};
    c.samples = 4;
    c.radii = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    c.mixed_radii = c.radii;
    c.out = "out-constant-d2";
  } else if (name == "constant-d3") {
    c.d = 3;
    c.L = 64;
    c.ensemble = {EnsembleKind::constant, 0.25, 1.0, 0.5, 1};
    c.samples = 2;
    c.radii = {2.0, 4.0, 8.0};
    c.band_threshold = 2.0;
    c.out = "out-constant-d3";
  } else if (name == "tiny-ring") {
    c.d = 1;
    c.L = 6;
    c.ensemble = {EnsembleKind::bernoulli_enumeration, 0.25, 1.0, 0.5, 0};
    c.samples = 64;
    c.radii = {0.5, 1.0};
    c.mixed_radii = {1.0};
    c.solver.rel_tol = 1e-14;
    c.out = "out-tiny-ring";
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.d < 1) throw ConfigError("lattice.d must be >= 1");
  if (c.L < 2 || c.L % 2 != 0) throw ConfigError("lattice.L must be even and >= 2");
  c.ensemble.validate();
  c.solver.validate();
  const double T = c.resolved_T();
  if (!(T > 0.0) || std::isinf(T)) throw ConfigError("T must be finite and positive");
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.ensemble.kind == EnsembleKind::bernoulli_enumeration) {
    const double edges = static_cast<double>(c.d) * std::pow(static_cast<double>(c.L), c.d);
    if (edges > 62 || static_cast<double>(c.samples) > std::ldexp(1.0, static_cast<int>(edges)))
      throw ConfigError("bernoulli_enumeration needs samples <= 2^edges on a tiny lattice");
  }
  for (int p : c.moment_orders)
    if (p < 1) throw ConfigError("moment orders must be positive");
  if (c.identity_instances < 1) throw ConfigError("identities.instances must be >= 1");
  if (!(c.band_threshold >= 1.0)) throw ConfigError("quenched.band_threshold must be >= 1");
  if (c.sample_index < 0) throw ConfigError("solve.sample_index must be >= 0");
}

}  // namespace alab
