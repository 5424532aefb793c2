// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alab/calculus.hpp"
#include "alab/commands.hpp"
#include "alab/dense_oracle.hpp"
#include "alab/ensembles.hpp"
#include "alab/estimators.hpp"
#include "alab/report.hpp"

using namespace alab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const SolverConfig kSolver{1e-10, 100000, Preconditioner::diagonal};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "alab_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double rel_sup(std::span<const double> got, std::span<const double> want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num = std::max(num, std::abs(got[i] - want[i]));
    den = std::max(den, std::abs(want[i]));
  }
  return den > 0.0 ? num / den : num;
}

double rel(double got, double want) {
  return want != 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
}

std::ostringstream sink;

Outcome exact_identities() {
  RunConfig cfg;
  cfg.out = (scratch() / "c1").string();
  cfg.ensemble.seed = 20131003;
  cfg.identity_instances = 100;
  const int code = cmd_identities(cfg, sink);
  const auto j = read_json(fs::path(cfg.out) / "identities.json");
  double worst = 0.0;
  for (const char* k : {"adjointness", "caccioppoli", "leibniz", "shift_covariance"})
    worst = std::max(worst, j[k]["max_relative"].get<double>());
  return {code == kExitPass && worst <= 1e-12, "worst relative defect " + fmt(worst)};
}

// Naive recomputation of an annealed gradient moment from dense columns.
double naive_gradient_moment(const EnsembleSpec& spec, const LatticePtr& lat, double T,
                             std::int64_t n, double R, int p) {
  const auto bin = gradient_bin_edges(*lat, R);
  double total = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const EdgeField g = grad(DenseGreenOracle(sample_field(spec, lat, k), T).column(0));
    double s = 0.0;
    for (const Edge& e : bin) s += std::pow(std::abs(g.at(e)), p);
    total += s / static_cast<double>(bin.size());
  }
  return std::pow(total / static_cast<double>(n), 1.0 / p);
}

double naive_mixed_moment(const EnsembleSpec& spec, const LatticePtr& lat, double T,
                          std::int64_t n, double R) {
  const auto bin = mixed_bin_edges(*lat, R);
  double total = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const DenseGreenOracle o(sample_field(spec, lat, k), T);
    VertexField diff = o.column(lat->forward(0, 0));
    const VertexField tail = o.column(0);
    for (std::size_t x = 0; x < diff.size(); ++x) diff[x] -= tail[x];
    const EdgeField m = grad(diff);
    double s = 0.0;
    for (const Edge& e : bin) s += std::abs(m.at(e));
    total += s / static_cast<double>(bin.size());
  }
  return total / static_cast<double>(n);
}

Outcome oracle_equivalence() {
  double worst_col = 0.0, worst_est = 0.0;
  for (auto [d, L] : {std::pair{2, 6}, {3, 4}}) {
    const auto lat = build_torus(d, L);
    const EnsembleSpec spec{EnsembleKind::iid_uniform, 0.25, 1.0, 0.5, 20131004};
    const double T = L * L / 16.0;
    const auto a = sample_field(spec, lat, 0);
    const DenseGreenOracle oracle(a, T);
    for (VertexId y = 0; y < lat->num_vertices(); ++y) {
      const GreenColumn col = green_column(a, T, y, kSolver);
      worst_col = std::max(worst_col, rel_sup(col.values.values(), oracle.column(y).values()));
    }
    // Quenched norm at R = 1/2 from the dense column.
    const EdgeField g = grad(oracle.column(0));
    double s = 0.0;
    for (const Edge& e : lat->annulus_edges(0, 0.5, 1.0)) s += g.at(e) * g.at(e);
    const double want = std::sqrt(s / std::pow(0.5, d));
    worst_est = std::max(worst_est, rel(quenched_annulus_norm(green_column(a, T, 0, kSolver), 0.5).value, want));

    AnnealedConfig cfg;
    cfg.T = T;
    cfg.samples = 4;
    cfg.solver = kSolver;
    cfg.radii = {0.5, 1.0};
    const auto grad_est = annealed_gradient_moment(spec, lat, cfg);
    for (const MomentEstimate& m : grad_est)
      worst_est = std::max(worst_est, rel(m.estimate, naive_gradient_moment(spec, lat, T, 4, m.r_bin, m.p)));
    for (const MomentEstimate& m : annealed_mixed_moment(spec, lat, cfg))
      worst_est = std::max(worst_est, rel(m.estimate, naive_mixed_moment(spec, lat, T, 4, m.r_bin)));
  }
  return {worst_col <= 1e-8 && worst_est <= 1e-8,
          "column error " + fmt(worst_col) + ", estimator error " + fmt(worst_est)};
}

Outcome mass_positivity() {
  std::mt19937_64 gen(20131005);
  double worst = 0.0, lowest = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const int d = i % 2 == 0 ? 2 : 3;
    const auto lat = build_torus(d, d == 2 ? 32 : 16);
    const EnsembleSpec spec{i % 4 < 2 ? EnsembleKind::iid_uniform : EnsembleKind::iid_bernoulli,
                            0.25, 1.0, 0.5, 20131005};
    const auto a = sample_field(spec, lat, i);
    const double T = std::pow(10.0, std::uniform_real_distribution<double>(0.0, 3.0)(gen));
    const GreenColumn col = green_column(a, T, 0, kSolver);
    double mass = 0.0, lo = INFINITY;
    for (double v : col.values.values()) {
      mass += v;
      lo = std::min(lo, v);
    }
    worst = std::max(worst, std::abs(mass - T) / T);
    lowest = std::min(lowest, lo / T);
  }
  return {worst <= 1e-8 && lowest > 0.0,
          "worst mass defect " + fmt(worst) + ", min G/T " + fmt(lowest)};
}

Outcome enumeration() {
  double worst = 0.0;
  struct Case {
    int d, L;
    std::vector<double> radii, mixed_radii;
    std::int64_t fields;
  };
  for (const Case& c : {Case{2, 2, {0.5}, {0.5}, 256}, Case{1, 6, {0.5, 1.0}, {1.0}, 64}}) {
    const auto lat = build_torus(c.d, c.L);
    const double T = std::max(1.0, c.L * c.L / 16.0);
    const EnsembleSpec spec{EnsembleKind::bernoulli_enumeration, 0.25, 1.0, 0.5, 0};
    AnnealedConfig cfg;
    cfg.T = T;
    cfg.samples = c.fields;
    cfg.radii = c.radii;
    cfg.solver = {1e-14, 100000, Preconditioner::diagonal};
    for (const MomentEstimate& m : annealed_gradient_moment(spec, lat, cfg)) {
      const auto bin = gradient_bin_edges(*lat, m.r_bin);
      const double exact = enumeration_oracle(lat, 0.25, T, [&](const CoefficientField&, const DenseGreenOracle& o) {
        const EdgeField g = grad(o.column(0));
        double s = 0.0;
        for (const Edge& e : bin) s += std::pow(std::abs(g.at(e)), m.p);
        return s / static_cast<double>(bin.size());
      });
      worst = std::max(worst, rel(m.estimate, std::pow(exact, 1.0 / m.p)));
    }
    cfg.radii = c.mixed_radii;
    for (const MomentEstimate& m : annealed_mixed_moment(spec, lat, cfg)) {
      const auto bin = mixed_bin_edges(*lat, m.r_bin);
      const Edge b{0, 0};
      const double exact = enumeration_oracle(lat, 0.25, T, [&](const CoefficientField&, const DenseGreenOracle& o) {
        VertexField diff = o.column(lat->head(b));
        const VertexField tail = o.column(b.base);
        for (std::size_t x = 0; x < diff.size(); ++x) diff[x] -= tail[x];
        const EdgeField g = grad(diff);
        double s = 0.0;
        for (const Edge& e : bin) s += std::abs(g.at(e));
        return s / static_cast<double>(bin.size());
      });
      worst = std::max(worst, rel(m.estimate, exact));
    }
  }
  return {worst <= 1e-10, "worst relative deviation " + fmt(worst)};
}

Outcome quenched_decay() {
  const RunConfig cfg = preset("accept-d3");
  const auto lat = build_torus(cfg.d, cfg.L);
  const double T = cfg.resolved_T();
  double worst_band = 0.0, slope_lo = INFINITY, slope_hi = -INFINITY;
  for (std::int64_t k = 0; k < cfg.samples; ++k) {
    const GreenColumn col = green_column(sample_field(cfg.ensemble, lat, k), T, 0, cfg.solver);
    std::vector<std::pair<double, double>> pts;
    double lo = INFINITY, hi = 0.0;
    for (double R : cfg.radii) {
      const double v = quenched_annulus_norm(col, R).value;
      pts.emplace_back(R, v);
      lo = std::min(lo, v * R * R);
      hi = std::max(hi, v * R * R);
    }
    worst_band = std::max(worst_band, hi / lo);
    const double s = fit_power_law(pts).slope;
    slope_lo = std::min(slope_lo, s);
    slope_hi = std::max(slope_hi, s);
  }
  return {worst_band <= 4.0 && slope_lo >= -2.4 && slope_hi <= -1.6,
          "max band " + fmt(worst_band) + ", slopes in [" + fmt(slope_lo) + ", " + fmt(slope_hi) + "]"};
}

nlohmann::json accept_d2_report;

void run_accept_d2() {
  if (!accept_d2_report.is_null()) return;
  RunConfig cfg = preset("accept-d2");
  cfg.out = (scratch() / "accept-d2").string();
  (void)cmd_annealed(cfg, sink);
  accept_d2_report = read_json(fs::path(cfg.out) / "fits.json");
}

const nlohmann::json* fit_for(const char* key, int p) {
  for (const auto& f : accept_d2_report[key])
    if (f["p"].get<int>() == p) return &f;
  return nullptr;
}

Outcome annealed_gradient() {
  run_accept_d2();
  const auto* f = fit_for("gradient_fits", 2);
  if (!f || (*f)["slope"].is_null()) return {false, "no fit"};
  const double s = (*f)["slope"].get<double>(), r2 = (*f)["r_squared"].get<double>();
  return {s >= -1.25 && s <= -0.75 && r2 >= 0.9, "p=2 slope " + fmt(s) + ", r^2 " + fmt(r2)};
}

Outcome annealed_mixed() {
  run_accept_d2();
  const auto* f = fit_for("mixed_fits", 1);
  if (!f || (*f)["slope"].is_null()) return {false, "no fit"};
  const double s = (*f)["slope"].get<double>();
  return {s >= -2.4 && s <= -1.6, "slope " + fmt(s) + ", r^2 " + fmt((*f)["r_squared"].get<double>())};
}

std::pair<double, double> nash_extremes(const GreenColumn& col) {
  const TorusLattice& lat = col.values.lattice();
  double lo = INFINITY, hi = 0.0;
  for (VertexId x = 0; x < lat.num_vertices(); ++x) {
    const double r = lat.vertex_distance(x, col.source);
    if (r < 2.0 || r > 8.0) continue;
    const double v = col.values[x] * std::pow(r + 1.0, lat.dim() - 2);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

Outcome nash_band() {
  const auto lat = build_torus(3, 32);
  const EnsembleSpec spec{EnsembleKind::iid_uniform, 0.25, 1.0, 0.5, 20131008};
  const double T = 64.0;
  double lo1 = INFINITY, hi1 = 0.0, lo2 = INFINITY, hi2 = 0.0;
  for (std::int64_t k = 0; k < 5; ++k) {
    const auto a = sample_field(spec, lat, k);
    const auto [l1, h1] = nash_extremes(green_column(a, T, 0, kSolver));
    const auto [l2, h2] = nash_extremes(green_column(a, 2 * T, 0, kSolver));
    lo1 = std::min(lo1, l1);
    hi1 = std::max(hi1, h1);
    lo2 = std::min(lo2, l2);
    hi2 = std::max(hi2, h2);
  }
  const double r1 = hi1 / lo1, r2 = hi2 / lo2;
  const double drift = std::max(r1, r2) / std::min(r1, r2);
  return {r1 <= 50.0 && r2 <= 50.0 && drift <= 2.0,
          "ratio " + fmt(r1) + " at T, " + fmt(r2) + " at 2T"};
}

Outcome monotone_and_collapse() {
  run_accept_d2();
  bool ok = accept_d2_report["monotone_in_p"].get<bool>();
  const alab::CsvData csv = read_csv(scratch() / "accept-d2" / "moments.csv");
  std::map<std::string, std::vector<std::pair<int, double>>> bins;
  const int cr = csv.column("r_bin"), cp = csv.column("p"), ce = csv.column("estimate");
  for (const auto& row : csv.rows)
    bins[row[static_cast<std::size_t>(cr)]].emplace_back(std::stoi(row[static_cast<std::size_t>(cp)]),
                                                         std::stod(row[static_cast<std::size_t>(ce)]));
  for (auto& [r, v] : bins) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i - 1].second <= v[i].second;
  }
  RunConfig c = preset("constant-d2");
  c.out = (scratch() / "constant-d2").string();
  const int code = cmd_annealed(c, sink);
  std::size_t rows = 0;
  bool zero = code == kExitPass;
  for (const char* f : {"moments.csv", "mixed_moments.csv"}) {
    const alab::CsvData d = read_csv(fs::path(c.out) / f);
    const int cs = d.column("stderr");
    for (const auto& row : d.rows) {
      zero = zero && row[static_cast<std::size_t>(cs)] == "0";
      ++rows;
    }
  }
  return {ok && zero, std::string(ok ? "monotone" : "NOT monotone") + " in p; constant ensemble stderr " +
                          (zero ? "all zero" : "NOT zero") + " over " + std::to_string(rows) + " rows"};
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::function<int(const RunConfig&)>>> cmds{
      {"identities", [](const RunConfig& c) { return cmd_identities(c, sink); }},
      {"quenched", [](const RunConfig& c) { return cmd_quenched(c, sink); }},
      {"annealed", [](const RunConfig& c) { return cmd_annealed(c, sink); }},
      {"solve", [](const RunConfig& c) { return cmd_solve(c, sink); }},
      {"fit", [](const RunConfig& c) { return cmd_fit(c, sink); }},
  };
  std::size_t files = 0;
  std::string mismatch;
  for (const auto& [name, fn] : cmds) {
    RunConfig cfg;
    cfg.L = 32;
    cfg.samples = 4;
    cfg.radii = {1.0, 2.0, 4.0};
    cfg.quenched_mixed_radii = {0.5};
    cfg.ensemble = {EnsembleKind::iid_bernoulli, 0.25, 1.0, 0.5, 20131010};
    const fs::path base = scratch() / ("det-" + name);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");
    for (const char* run : {"a", "b"}) {
      const fs::path cwd = fs::current_path();
      fs::current_path(base / run);
      if (name == "fit") {
        cfg.out = "fit-src";
        (void)cmd_annealed(cfg, sink);
      }
      (void)fn(cfg);
      fs::current_path(cwd);
    }
    for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel_path = fs::relative(entry.path(), base / "a");
      ++files;
      if (slurp(entry.path()) != slurp(base / "b" / rel_path)) mismatch += " " + name + "/" + rel_path.string();
    }
  }
  return {mismatch.empty() && files > 0,
          std::to_string(files) + " files compared" + (mismatch.empty() ? "" : ", differ:" + mismatch)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact identities", exact_identities},
      {"oracle equivalence", oracle_equivalence},
      {"mass and positivity", mass_positivity},
      {"enumeration oracle", enumeration},
      {"quenched decay d=3", quenched_decay},
      {"annealed gradient exponent d=2", annealed_gradient},
      {"annealed mixed exponent d=2", annealed_mixed},
      {"Nash band d=3", nash_band},
      {"moment monotonicity and point-mass collapse", monotone_and_collapse},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s: %s (%s; %.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
