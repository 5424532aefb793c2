#include "alab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "alab/calculus.hpp"
#include "alab/parallel.hpp"

namespace alab {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

std::vector<Edge> closed_shell(const TorusLattice& lat, const HalfPoint& centre, double lo,
                               double hi) {
  const double lo4 = 4.0 * lo * lo;
  const double hi4 = 4.0 * hi * hi;
  std::vector<Edge> out;
  for (std::size_t k = 0; k < lat.num_edges(); ++k) {
    const Edge e = lat.edge(k);
    const auto s = static_cast<double>(lat.sq4_distance(lat.midpoint(e), centre));
    if (s >= lo4 && s <= hi4) out.push_back(e);
  }
  return out;
}

void validate_annealed(const TorusLattice& lat, const AnnealedConfig& cfg) {
  if (cfg.samples < 2) throw ConfigError("annealed estimators need at least 2 samples");
  if (!(cfg.T > 0.0) || std::isinf(cfg.T)) throw ConfigError("T must be finite and positive");
  if (cfg.radii.empty()) throw ConfigError("no distance bins requested");
  for (double R : cfg.radii)
    if (!(R > 0.0) || 2.0 * R > 0.5 * lat.side())
      throw DomainError("bin [" + std::to_string(R) + ", " + std::to_string(2 * R) +
                        ") does not fit in L/2");
  for (int p : cfg.orders)
    if (p < 1) throw ConfigError("moment orders must be positive integers");
  cfg.solver.validate();
}

// Per-sample power means |X|^p over each bin; layout [bin][order].
std::vector<double> bin_power_means(const EdgeField& x, const std::vector<std::vector<Edge>>& bins,
                                    std::span<const int> orders) {
  std::vector<double> out;
  out.reserve(bins.size() * orders.size());
  for (const auto& bin : bins) {
    for (int p : orders) {
      double s = 0.0;
      for (const Edge& e : bin) s += ipow(std::abs(x.at(e)), p);
      out.push_back(s / static_cast<double>(bin.size()));
    }
  }
  return out;
}

std::vector<MomentEstimate> reduce_samples(const std::vector<std::vector<double>>& per_sample,
                                           const std::vector<std::vector<Edge>>& bins,
                                           std::span<const double> radii,
                                           std::span<const int> orders) {
  std::vector<MomentEstimate> out;
  const std::size_t n = per_sample.size();
  std::vector<double> column(n);
  for (std::size_t b = 0; b < bins.size(); ++b) {
    for (std::size_t o = 0; o < orders.size(); ++o) {
      const std::size_t slot = b * orders.size() + o;
      for (std::size_t k = 0; k < n; ++k) column[k] = per_sample[k][slot];
      const JackknifeResult jk = jackknife_power_mean(column, orders[o]);
      out.push_back(MomentEstimate{radii[b], orders[o], jk.estimate, jk.std_error,
                                   static_cast<std::int64_t>(n), bins[b].size()});
    }
  }
  return out;
}

template <class Fn>
std::vector<std::vector<double>> run_samples(const AnnealedConfig& cfg, Fn&& per_sample) {
  const std::function<std::vector<double>(std::int64_t)> task = [&](std::int64_t k) {
    try {
      return per_sample(k);
    } catch (const SolverError& e) {
      throw SolverError("sample " + std::to_string(k) + ": " + e.what(), e.residual(),
                        e.iterations(), k);
    }
  };
  return parallel_map(cfg.samples, cfg.threads, task);
}

FieldSource ensemble_source(const EnsembleSpec& spec, const LatticePtr& lat) {
  spec.validate();
  return [spec, lat](std::int64_t k) { return sample_field(spec, lat, k); };
}

}  // namespace

AnnulusStat quenched_annulus_norm(const GreenColumn& col, double R) {
  const TorusLattice& lat = col.values.lattice();
  if (!(R > 0.0)) throw DomainError("annulus radius must be positive");
  if (2.0 * R > 0.25 * lat.side())
    throw DomainError("annulus radius out of range: 2R = " + std::to_string(2 * R) +
                      " exceeds L/4 = " + std::to_string(0.25 * lat.side()));
  const std::vector<Edge> annulus = lat.annulus_edges(col.source, R, 2.0 * R);
  if (annulus.empty()) throw DomainError("empty annulus");
  const EdgeField g = grad_green(col);
  double s = 0.0;
  for (const Edge& e : annulus) s += g.at(e) * g.at(e);
  return {R, std::sqrt(s * std::pow(R, -lat.dim())), annulus.size()};
}

AnnulusStat quenched_mixed_norm(const CoefficientField& a, double T, VertexId y, double R,
                                const SolverConfig& cfg, std::size_t max_ball_vertices) {
  const TorusLattice& lat = a.lattice();
  if (!(R > 0.0)) throw DomainError("radius must be positive");
  if (16.0 * R > 0.25 * lat.side())
    throw DomainError("mixed annulus out of range: 16R = " + std::to_string(16 * R) +
                      " exceeds L/4 = " + std::to_string(0.25 * lat.side()));
  const HalfPoint centre = lat.point(y);
  const std::vector<Edge> ball = closed_shell(lat, centre, 0.0, R);
  if (ball.empty()) throw DomainError("no edges within distance R of the centre");
  std::set<VertexId> endpoints;
  for (const Edge& b : ball) {
    endpoints.insert(b.base);
    endpoints.insert(lat.head(b));
  }
  if (endpoints.size() > max_ball_vertices)
    throw DomainError("cost guard: inner ball needs " + std::to_string(endpoints.size()) +
                      " solves, limit " + std::to_string(max_ball_vertices));
  const std::vector<VertexId> sources(endpoints.begin(), endpoints.end());
  const std::function<GreenColumn(std::int64_t)> solve_one = [&](std::int64_t i) {
    return green_column(a, T, sources[static_cast<std::size_t>(i)], cfg);
  };
  const std::vector<GreenColumn> cols =
      parallel_map(static_cast<std::int64_t>(sources.size()), 0, solve_one);
  auto column_of = [&](VertexId v) -> const GreenColumn& {
    return cols[static_cast<std::size_t>(std::lower_bound(sources.begin(), sources.end(), v) -
                                         sources.begin())];
  };

  const std::vector<Edge> outer = closed_shell(lat, centre, 8.0 * R, 16.0 * R);
  if (outer.empty()) throw DomainError("empty outer annulus");
  double s = 0.0;
  for (const Edge& b : ball) {
    const EdgeField mixed = mixed_grad_from_columns(column_of(b.base), column_of(lat.head(b)));
    for (const Edge& e : outer) s += mixed.at(e) * mixed.at(e);
  }
  return {R, std::sqrt(s * std::pow(R, -2.0 * lat.dim())), outer.size() * ball.size()};
}

JackknifeResult jackknife_power_mean(std::span<const double> s, int p) {
  const std::size_t n = s.size();
  if (n < 2) throw ConfigError("jackknife needs at least 2 samples");
  double total = 0.0;
  for (double v : s) total += v;
  JackknifeResult out;
  out.estimate = std::pow(total / static_cast<double>(n), 1.0 / p);

  std::vector<double> loo(n);
  for (std::size_t k = 0; k < n; ++k)
    loo[k] = std::pow(std::max(0.0, total - s[k]) / static_cast<double>(n - 1), 1.0 / p);
  double shift = 0.0;
  for (double v : loo) shift += v - loo[0];
  const double mean = loo[0] + shift / static_cast<double>(n);
  double var = 0.0;
  for (double v : loo) var += (v - mean) * (v - mean);
  out.std_error = std::sqrt(var * static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

std::vector<Edge> gradient_bin_edges(const TorusLattice& lat, double R) {
  return lat.edges_in_shell(lat.point(lat.origin()), R, 2.0 * R);
}

std::vector<Edge> mixed_bin_edges(const TorusLattice& lat, double R) {
  return lat.edges_in_shell(lat.midpoint(Edge{lat.origin(), 0}), R, 2.0 * R);
}

std::vector<MomentEstimate> annealed_gradient_moment(const FieldSource& source,
                                                     const LatticePtr& lat,
                                                     const AnnealedConfig& cfg) {
  validate_annealed(*lat, cfg);
  std::vector<std::vector<Edge>> bins;
  for (double R : cfg.radii) {
    bins.push_back(gradient_bin_edges(*lat, R));
    if (bins.back().empty()) throw DomainError("empty distance bin at R = " + std::to_string(R));
  }
  const auto per_sample = run_samples(cfg, [&](std::int64_t k) {
    const CoefficientField a = source(k);
    const GreenColumn col = green_column(a, cfg.T, lat->origin(), cfg.solver);
    return bin_power_means(grad_green(col), bins, cfg.orders);
  });
  return reduce_samples(per_sample, bins, cfg.radii, cfg.orders);
}

std::vector<MomentEstimate> annealed_gradient_moment(const EnsembleSpec& spec,
                                                     const LatticePtr& lat,
                                                     const AnnealedConfig& cfg) {
  return annealed_gradient_moment(ensemble_source(spec, lat), lat, cfg);
}

std::vector<MomentEstimate> annealed_mixed_moment(const FieldSource& source, const LatticePtr& lat,
                                                  const AnnealedConfig& cfg) {
  validate_annealed(*lat, cfg);
  std::vector<std::vector<Edge>> bins;
  for (double R : cfg.radii) {
    bins.push_back(mixed_bin_edges(*lat, R));
    if (bins.back().empty()) throw DomainError("empty distance bin at R = " + std::to_string(R));
  }
  static constexpr int kFirstMoment[] = {1};
  const Edge b{lat->origin(), 0};
  const auto per_sample = run_samples(cfg, [&](std::int64_t k) {
    const CoefficientField a = source(k);
    const GreenColumn tail = green_column(a, cfg.T, b.base, cfg.solver);
    const GreenColumn head = green_column(a, cfg.T, lat->head(b), cfg.solver);
    return bin_power_means(mixed_grad_from_columns(tail, head), bins, kFirstMoment);
  });
  return reduce_samples(per_sample, bins, cfg.radii, kFirstMoment);
}

std::vector<MomentEstimate> annealed_mixed_moment(const EnsembleSpec& spec, const LatticePtr& lat,
                                                  const AnnealedConfig& cfg) {
  return annealed_mixed_moment(ensemble_source(spec, lat), lat, cfg);
}

std::vector<NashShell> nash_ratio_profile(const GreenColumn& col) {
  const TorusLattice& lat = col.values.lattice();
  const int d = lat.dim();
  if (d < 3) throw DomainError("Nash ratio profile is defined for d >= 3 only, got d = " +
                               std::to_string(d));
  const int max_shell = lat.side() / 4;
  std::vector<NashShell> shells(static_cast<std::size_t>(max_shell) + 1);
  for (int r = 0; r <= max_shell; ++r) shells[static_cast<std::size_t>(r)].r = r;
  for (VertexId x = 0; x < lat.num_vertices(); ++x) {
    const double dist = lat.vertex_distance(x, col.source);
    const auto r = static_cast<int>(std::floor(dist));
    if (r > max_shell) continue;
    const double ratio = col.values[x] * std::pow(dist + 1.0, d - 2);
    NashShell& sh = shells[static_cast<std::size_t>(r)];
    if (sh.vertex_count == 0) {
      sh.min_ratio = sh.max_ratio = ratio;
    } else {
      sh.min_ratio = std::min(sh.min_ratio, ratio);
      sh.max_ratio = std::max(sh.max_ratio, ratio);
    }
    ++sh.vertex_count;
  }
  std::erase_if(shells, [](const NashShell& s) { return s.vertex_count == 0; });
  return shells;
}

}  // namespace alab
