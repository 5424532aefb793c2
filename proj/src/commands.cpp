#include "alab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>

#include "alab/calculus.hpp"
#include "alab/dense_oracle.hpp"
#include "alab/estimators.hpp"
#include "alab/field_io.hpp"
#include "alab/parallel.hpp"
#include "alab/report.hpp"

namespace alab {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                    0x6964656eu};
  return std::mt19937_64(seq);
}

double symmetric_uniform(std::mt19937_64& gen) {
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

template <class Field>
Field random_field(const LatticePtr& lat, std::mt19937_64& gen) {
  Field f(lat);
  for (double& v : f.values()) v = symmetric_uniform(gen);
  return f;
}

CoefficientField random_coefficients(const LatticePtr& lat, double lambda, std::mt19937_64& gen) {
  EdgeField a(lat);
  for (double& v : a.values()) v = std::min(1.0, lambda + (1.0 - lambda) * 0.5 * (symmetric_uniform(gen) + 1.0));
  return CoefficientField(std::move(a), lambda);
}

RunConfig resolved(const RunConfig& cfg) {
  RunConfig r = cfg;
  r.T = cfg.resolved_T();
  return r;
}

ordered_json report_header(const std::string& command, const RunConfig& cfg) {
  ordered_json j;
  j["command"] = command;
  j["schema_version"] = kCsvSchemaVersion;
  j["seed"] = cfg.ensemble.seed;
  j["config"] = to_json(resolved(cfg));
  return j;
}

fs::path prepare_out(const RunConfig& cfg) {
  const fs::path out(cfg.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out + ": " + ec.message());
  return out;
}

// Small tori where the dense oracle is cheap; used for the shift suite.
std::vector<LatticePtr> small_tori() {
  return {build_torus(1, 8), build_torus(2, 6), build_torus(3, 4)};
}

ordered_json defect_json(std::int64_t instances, const Defect& d) {
  return ordered_json{{"instances", instances},
                      {"max_absolute", d.absolute},
                      {"max_relative", d.relative},
                      {"pass", d.relative <= kIdentityTolerance}};
}

void merge(Defect& acc, const Defect& d) {
  acc.absolute = std::max(acc.absolute, d.absolute);
  acc.relative = std::max(acc.relative, d.relative);
}

Defect shift_covariance_defect(const LatticePtr& lat, double lambda, double T,
                               std::mt19937_64& gen) {
  const CoefficientField a = random_coefficients(lat, lambda, gen);
  const auto z = static_cast<VertexId>(gen() % lat->num_vertices());
  const auto y = static_cast<VertexId>(gen() % lat->num_vertices());
  const CoefficientField b = shift_field(a, z);
  // G_b(x, y) = G_a(x + z, y + z).
  const VertexField ga = DenseGreenOracle(a, T).column(lat->translate(y, z));
  const VertexField gb = DenseGreenOracle(b, T).column(y);
  Defect d;
  double scale = 0.0;
  for (VertexId x = 0; x < lat->num_vertices(); ++x) {
    d.absolute = std::max(d.absolute, std::abs(gb[x] - ga[lat->translate(x, z)]));
    scale = std::max(scale, std::abs(ga[x]));
  }
  d.relative = scale > 0.0 ? d.absolute / scale : 0.0;
  return d;
}

double log_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) return std::nan("");
  for (const auto& [r, v] : pts)
    if (!(v > 0.0)) return std::nan("");
  return fit_power_law(pts).slope;
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

struct BandSummary {
  double band = 1.0;
  double slope = 0.0;
};

BandSummary band_of(const std::vector<AnnulusStat>& stats, double exponent) {
  BandSummary s;
  if (stats.empty()) return s;
  double lo = INFINITY, hi = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (const AnnulusStat& st : stats) {
    const double scaled = st.value * std::pow(st.R, exponent);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    pts.emplace_back(st.R, st.value);
  }
  s.band = lo > 0.0 ? hi / lo : INFINITY;
  s.slope = log_slope(pts);
  return s;
}

ordered_json fit_section(const std::vector<MomentEstimate>& est, const FitWindow& w,
                         bool& pass) {
  std::map<int, std::vector<std::pair<double, double>>> series;
  for (const MomentEstimate& m : est)
    if (m.r_bin >= w.r_min && m.r_bin <= w.r_max) series[m.p].emplace_back(m.r_bin, m.estimate);
  ordered_json out = ordered_json::array();
  for (const MomentEstimate& m : est) series.try_emplace(m.p);
  for (const auto& [p, pts] : series) {
    ordered_json f;
    f["p"] = p;
    f["points"] = pts.size();
    const bool checked =
        w.enforce && std::find(w.orders.begin(), w.orders.end(), p) != w.orders.end();
    bool ok = false;
    bool fitted = pts.size() >= 3 &&
                  std::all_of(pts.begin(), pts.end(), [](const auto& q) { return q.second > 0.0; });
    if (fitted) {
      const PowerLawFit fit = fit_power_law(pts);
      f["slope"] = fit.slope;
      f["intercept"] = fit.intercept;
      f["r_squared"] = fit.r_squared;
      f["slope_stderr"] = fit.slope_stderr;
      ok = fit.slope >= w.slope_lo && fit.slope <= w.slope_hi && fit.r_squared >= w.min_r_squared;
    } else {
      f["slope"] = nullptr;
      f["reason"] = "fewer than 3 positive points in the fit window";
    }
    f["in_window"] = ok;
    f["enforced"] = checked;
    if (checked && !ok) pass = false;
    out.push_back(std::move(f));
  }
  return out;
}

void write_moments(const std::vector<MomentEstimate>& est, const fs::path& path) {
  CsvTable t({"r_bin", "p", "estimate", "stderr", "n_edges", "n_samples"});
  for (const MomentEstimate& m : est)
    t.row().add(m.r_bin).add(m.p).add(m.estimate).add(m.std_error).add(m.n_edges).add(m.n_samples);
  t.write(path);
}

// Power-mean monotonicity per bin; records the worst relative inversion.
bool monotone_in_p(const std::vector<MomentEstimate>& est, double& worst) {
  std::map<double, std::vector<std::pair<int, double>>> bins;
  for (const MomentEstimate& m : est) bins[m.r_bin].emplace_back(m.p, m.estimate);
  worst = 0.0;
  for (auto& [r, v] : bins) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double drop = v[i - 1].second - v[i].second;
      if (drop > 0.0) worst = std::max(worst, drop / std::abs(v[i - 1].second));
    }
  }
  return worst <= 1e-12;
}

}  // namespace

int cmd_identities(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const std::uint64_t seed = cfg.ensemble.seed;
  const double lambda = cfg.ensemble.lambda;
  std::vector<LatticePtr> lats{build_torus(cfg.d, cfg.L)};
  for (auto& l : small_tori()) lats.push_back(l);

  std::mt19937_64 gen = make_stream(seed, 1);
  Defect adj, cacc, leib, shift;
  const std::int64_t n = cfg.identity_instances;
  for (std::int64_t i = 0; i < n; ++i) {
    const LatticePtr& lat = lats[static_cast<std::size_t>(i) % lats.size()];
    const auto zeta = random_field<VertexField>(lat, gen);
    const auto xi = random_field<EdgeField>(lat, gen);
    merge(adj, adjointness_defect(zeta, xi));
    const CoefficientField a = random_coefficients(lat, lambda, gen);
    const auto u = random_field<VertexField>(lat, gen);
    const auto eta = random_field<VertexField>(lat, gen);
    merge(cacc, caccioppoli_identity_defect(a, u, eta));
    const auto v = random_field<VertexField>(lat, gen);
    const auto eta2 = random_field<VertexField>(lat, gen);
    merge(leib, leibniz_identity_defect(a, v, eta2));
  }
  const auto tori = small_tori();
  std::mt19937_64 sgen = make_stream(seed, 2);
  for (std::int64_t i = 0; i < n; ++i) {
    const LatticePtr& lat = tori[static_cast<std::size_t>(i) % tori.size()];
    merge(shift, shift_covariance_defect(lat, lambda, 0.0625 * lat->side() * lat->side(), sgen));
  }

  ordered_json j = report_header("identities", cfg);
  j["tolerance"] = kIdentityTolerance;
  j["lattices"] = ordered_json::array();
  for (const auto& l : lats) j["lattices"].push_back({{"d", l->dim()}, {"L", l->side()}});
  j["adjointness"] = defect_json(n, adj);
  j["caccioppoli"] = defect_json(n, cacc);
  j["leibniz"] = defect_json(n, leib);
  j["shift_covariance"] = defect_json(n, shift);
  const bool pass = adj.relative <= kIdentityTolerance && cacc.relative <= kIdentityTolerance &&
                    leib.relative <= kIdentityTolerance && shift.relative <= kIdentityTolerance;
  j["pass"] = pass;
  write_json(j, prepare_out(cfg) / "identities.json");
  log << "adjointness      max relative defect " << format_double(adj.relative) << '\n'
      << "caccioppoli      max relative defect " << format_double(cacc.relative) << '\n'
      << "leibniz          max relative defect " << format_double(leib.relative) << '\n'
      << "shift covariance max relative defect " << format_double(shift.relative) << '\n'
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitPass : kExitBreach;
}

int cmd_quenched(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const LatticePtr lat = build_torus(cfg.d, cfg.L);
  const double T = cfg.resolved_T();
  const double quarter = 0.25 * cfg.L;
  if (cfg.radii.empty()) throw ConfigError("no radii configured");
  for (double R : cfg.radii)
    if (!(R > 0.0) || 2.0 * R > quarter)
      throw DomainError("radius " + format_double(R) + " out of range: need 0 < 2R <= L/4 = " +
                        format_double(quarter));
  for (double R : cfg.quenched_mixed_radii)
    if (!(R > 0.0) || 16.0 * R > quarter)
      throw DomainError("mixed radius " + format_double(R) +
                        " out of range: need 0 < 16R <= L/4 = " + format_double(quarter));
  cfg.ensemble.validate();

  struct SampleResult {
    std::vector<AnnulusStat> grad, mixed;
  };
  const std::function<SampleResult(std::int64_t)> task = [&](std::int64_t k) {
    try {
      const CoefficientField a = sample_field(cfg.ensemble, lat, k);
      SampleResult r;
      const GreenColumn col = green_column(a, T, lat->origin(), cfg.solver);
      for (double R : cfg.radii) r.grad.push_back(quenched_annulus_norm(col, R));
      for (double R : cfg.quenched_mixed_radii)
        r.mixed.push_back(
            quenched_mixed_norm(a, T, lat->origin(), R, cfg.solver, cfg.max_ball_vertices));
      return r;
    } catch (const SolverError& e) {
      throw SolverError("sample " + std::to_string(k) + ": " + e.what(), e.residual(),
                        e.iterations(), k);
    }
  };
  const std::vector<SampleResult> results = parallel_map(cfg.samples, 0, task);

  const fs::path out = prepare_out(cfg);
  const int d = cfg.d;
  CsvTable grad_csv({"sample", "R", "value", "scaled", "edge_count"});
  CsvTable mixed_csv({"sample", "R", "value", "scaled", "edge_count"});
  ordered_json samples = ordered_json::array();
  double worst_grad = 1.0, worst_mixed = 1.0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const SampleResult& r = results[k];
    for (const AnnulusStat& s : r.grad)
      grad_csv.row().add(k).add(s.R).add(s.value).add(s.value * std::pow(s.R, d - 1)).add(s.edge_count);
    for (const AnnulusStat& s : r.mixed)
      mixed_csv.row().add(k).add(s.R).add(s.value).add(s.value * std::pow(s.R, d)).add(s.edge_count);
    const BandSummary g = band_of(r.grad, d - 1);
    ordered_json sj{{"sample", k}, {"band", g.band}, {"slope", number_or_null(g.slope)}};
    worst_grad = std::max(worst_grad, g.band);
    if (!r.mixed.empty()) {
      const BandSummary m = band_of(r.mixed, d);
      sj["mixed_band"] = m.band;
      sj["mixed_slope"] = number_or_null(m.slope);
      worst_mixed = std::max(worst_mixed, m.band);
    }
    samples.push_back(std::move(sj));
  }
  grad_csv.write(out / "quenched.csv");
  if (!cfg.quenched_mixed_radii.empty()) mixed_csv.write(out / "quenched_mixed.csv");

  const bool pass = worst_grad <= cfg.band_threshold && worst_mixed <= cfg.band_threshold;
  ordered_json j = report_header("quenched", cfg);
  j["T"] = T;
  j["band_threshold"] = cfg.band_threshold;
  j["max_band"] = worst_grad;
  if (!cfg.quenched_mixed_radii.empty()) j["max_mixed_band"] = worst_mixed;
  j["samples"] = std::move(samples);
  j["pass"] = pass;
  write_json(j, out / "quenched.json");
  log << "max band ratio " << format_double(worst_grad);
  if (!cfg.quenched_mixed_radii.empty()) log << ", mixed " << format_double(worst_mixed);
  log << " (threshold " << format_double(cfg.band_threshold) << ")\n" << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitPass : kExitBreach;
}

int cmd_annealed(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const LatticePtr lat = build_torus(cfg.d, cfg.L);
  AnnealedConfig ac;
  ac.T = cfg.resolved_T();
  ac.radii = cfg.radii;
  ac.orders = cfg.moment_orders;
  ac.samples = cfg.samples;
  ac.solver = cfg.solver;
  const std::vector<MomentEstimate> grad = annealed_gradient_moment(cfg.ensemble, lat, ac);
  std::vector<MomentEstimate> mixed;
  if (cfg.annealed_mixed) {
    AnnealedConfig mc = ac;
    mc.radii = cfg.mixed_radii;
    mixed = annealed_mixed_moment(cfg.ensemble, lat, mc);
  }

  const fs::path out = prepare_out(cfg);
  write_moments(grad, out / "moments.csv");
  if (cfg.annealed_mixed) write_moments(mixed, out / "mixed_moments.csv");

  bool pass = true;
  ordered_json j = report_header("annealed", cfg);
  j["T"] = ac.T;
  j["pooling"] =
      "each estimate averages over samples and over all edges of the distance bin [r_bin, 2 r_bin); "
      "gradient source y = 0, mixed source edge b = [0, e_1]; stderr is a jackknife over samples";
  j["gradient_fit_window"] = {{"r_min", cfg.gradient_fit.r_min}, {"r_max", cfg.gradient_fit.r_max},
                              {"slope", {cfg.gradient_fit.slope_lo, cfg.gradient_fit.slope_hi}},
                              {"min_r_squared", cfg.gradient_fit.min_r_squared}};
  j["gradient_fits"] = fit_section(grad, cfg.gradient_fit, pass);
  if (cfg.annealed_mixed) {
    j["mixed_fit_window"] = {{"r_min", cfg.mixed_fit.r_min}, {"r_max", cfg.mixed_fit.r_max},
                             {"slope", {cfg.mixed_fit.slope_lo, cfg.mixed_fit.slope_hi}},
                             {"min_r_squared", cfg.mixed_fit.min_r_squared}};
    j["mixed_fits"] = fit_section(mixed, cfg.mixed_fit, pass);
  }
  double worst = 0.0;
  const bool monotone = monotone_in_p(grad, worst);
  j["monotone_in_p"] = monotone;
  j["max_monotonicity_violation"] = worst;
  if (!monotone) pass = false;
  j["pass"] = pass;
  write_json(j, out / "fits.json");

  for (const auto& f : j["gradient_fits"])
    log << "gradient p=" << f["p"].get<int>() << " slope "
        << (f["slope"].is_null() ? std::string("n/a") : format_double(f["slope"].get<double>()))
        << (f["enforced"].get<bool>() ? (f["in_window"].get<bool>() ? " [in window]" : " [OUT OF WINDOW]") : "")
        << '\n';
  if (cfg.annealed_mixed)
    for (const auto& f : j["mixed_fits"])
      log << "mixed    p=" << f["p"].get<int>() << " slope "
          << (f["slope"].is_null() ? std::string("n/a") : format_double(f["slope"].get<double>()))
          << (f["enforced"].get<bool>() ? (f["in_window"].get<bool>() ? " [in window]" : " [OUT OF WINDOW]") : "")
          << '\n';
  log << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitPass : kExitBreach;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const LatticePtr lat = build_torus(cfg.d, cfg.L);
  const double T = cfg.resolved_T();
  const CoefficientField a = sample_field(cfg.ensemble, lat, cfg.sample_index);
  const GreenColumn col = green_column(a, T, lat->origin(), cfg.solver);

  const fs::path out = prepare_out(cfg);
  export_field(a, out / "field.bin");
  double mass = 0.0, min_value = INFINITY;
  for (double v : col.values.values()) {
    mass += v;
    min_value = std::min(min_value, v);
  }
  ordered_json j = report_header("solve", cfg);
  j["T"] = T;
  j["sample_index"] = cfg.sample_index;
  j["source"] = col.source;
  j["iterations"] = col.iterations;
  j["residual"] = col.residual;
  j["mass_defect"] = std::abs(mass - T) / T;
  j["positive"] = min_value > 0.0;
  if (cfg.d >= 3) {
    export_green(col, a.lambda(), out / "green.bin");
    j["green"] = "green.bin";
  } else {
    // d <= 2: gradient only.
    const EdgeField g = grad_green(col);
    const FieldProvenance& pv = a.provenance();
    std::ofstream f(out / "grad_green.bin", std::ios::binary);
    if (!f) throw ConfigError("cannot write grad_green.bin");
    write_record(f, RecordHeader{cfg.d, cfg.L, a.lambda(), pv.kind_tag, pv.seed, pv.index},
                 g.values());
    j["grad_green"] = "grad_green.bin";
  }
  j["field"] = "field.bin";
  write_json(j, out / "solve.json");
  log << "solved in " << col.iterations << " iterations, relative residual "
      << format_double(col.residual) << '\n';
  return kExitPass;
}

int cmd_fit(const RunConfig& cfg, std::ostream& log) {
  const fs::path input = cfg.fit_input.empty() ? fs::path(cfg.out) / "moments.csv" : fs::path(cfg.fit_input);
  const CsvData csv = read_csv(input);
  std::vector<MomentEstimate> est;
  const int cr = csv.column("r_bin"), cp = csv.column("p"), ce = csv.column("estimate");
  const int rr = csv.column("r"), rv = csv.column("value");
  auto num = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("non-numeric CSV cell '" + s + "' in " + input.string());
    }
  };
  if (cr >= 0 && cp >= 0 && ce >= 0) {
    for (const auto& row : csv.rows) {
      MomentEstimate m;
      m.r_bin = num(row[static_cast<std::size_t>(cr)]);
      m.p = static_cast<int>(num(row[static_cast<std::size_t>(cp)]));
      m.estimate = num(row[static_cast<std::size_t>(ce)]);
      est.push_back(m);
    }
  } else if (rr >= 0 && rv >= 0) {
    for (const auto& row : csv.rows) {
      MomentEstimate m;
      m.r_bin = num(row[static_cast<std::size_t>(rr)]);
      m.p = 1;
      m.estimate = num(row[static_cast<std::size_t>(rv)]);
      est.push_back(m);
    }
  } else {
    throw ConfigError("fit input needs columns (r_bin, p, estimate) or (r, value)");
  }
  bool pass = true;
  ordered_json j = report_header("fit", cfg);
  j["input"] = input.string();
  j["window"] = {{"r_min", cfg.gradient_fit.r_min}, {"r_max", cfg.gradient_fit.r_max},
                 {"slope", {cfg.gradient_fit.slope_lo, cfg.gradient_fit.slope_hi}},
                 {"min_r_squared", cfg.gradient_fit.min_r_squared}};
  j["fits"] = fit_section(est, cfg.gradient_fit, pass);
  j["pass"] = pass;
  write_json(j, prepare_out(cfg) / "fit.json");
  for (const auto& f : j["fits"])
    log << "p=" << f["p"].get<int>() << " slope "
        << (f["slope"].is_null() ? std::string("n/a") : format_double(f["slope"].get<double>()))
        << '\n';
  log << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitPass : kExitBreach;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log,
                std::ostream& err) {
  try {
    if (name == "identities") return cmd_identities(cfg, log);
    if (name == "quenched") return cmd_quenched(cfg, log);
    if (name == "annealed") return cmd_annealed(cfg, log);
    if (name == "solve") return cmd_solve(cfg, log);
    if (name == "fit") return cmd_fit(cfg, log);
    err << "error: unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace alab
