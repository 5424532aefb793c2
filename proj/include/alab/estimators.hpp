#pragma once

// Quenched annulus norms, annealed moments with jackknife errors, Nash ratio
// profiles, log-log power-law fits and the exhaustive enumeration oracle.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "alab/dense_oracle.hpp"
#include "alab/ensembles.hpp"
#include "alab/solver.hpp"

namespace alab {

struct AnnulusStat {
  double R = 0.0;
  double value = 0.0;
  std::size_t edge_count = 0;
};

/// (R^{-d} sum_{R <= |e-y| <= 2R} |grad G_T(e, y)|^2)^{1/2}, y = col.source.
/// Requires 2R <= L/4 and a non-empty annulus (DomainError).
AnnulusStat quenched_annulus_norm(const GreenColumn& col, double R);

/// (R^{-2d} sum_{8R <= |e-y| <= 16R} sum_{|b-y| <= R} |grad grad G_T(e, b)|^2)^{1/2}.
/// One solve per endpoint of the inner ball edges. Requires 16R <= L/4, a
/// non-empty inner ball and at most `max_ball_vertices` endpoints.
AnnulusStat quenched_mixed_norm(const CoefficientField& a, double T, VertexId y, double R,
                                const SolverConfig& cfg, std::size_t max_ball_vertices = 64);

/// Annealed moment of an edge quantity over the dyadic bin [r_bin, 2 r_bin).
struct MomentEstimate {
  double r_bin = 0.0;
  /// Moment order p: estimate = <|X|^p>^{1/p}, averaged over samples and bin edges.
  int p = 0;
  double estimate = 0.0;
  /// Jackknife over samples.
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::size_t n_edges = 0;
};

struct JackknifeResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// (mean_k s_k)^{1/p} and its leave-one-out jackknife error, for per-sample
/// p-th power means s_k. Identical inputs give std_error exactly 0.
JackknifeResult jackknife_power_mean(std::span<const double> per_sample, int p);

using FieldSource = std::function<CoefficientField(std::int64_t)>;

struct AnnealedConfig {
  double T = 0.0;
  /// Lower edges R of the bins [R, 2R); each needs 2R <= L/2.
  std::vector<double> radii;
  /// Moment orders of |grad G|; the mixed estimator always uses order 1.
  std::vector<int> orders{1, 2, 4};
  std::int64_t samples = 0;
  SolverConfig solver;
  /// 0 = default_thread_count().
  unsigned threads = 0;
};

/// Source y = 0. Results ordered by bin, then by order.
std::vector<MomentEstimate> annealed_gradient_moment(const FieldSource& source,
                                                     const LatticePtr& lat,
                                                     const AnnealedConfig& cfg);
std::vector<MomentEstimate> annealed_gradient_moment(const EnsembleSpec& spec,
                                                     const LatticePtr& lat,
                                                     const AnnealedConfig& cfg);

/// First absolute moment of grad grad G_T(e, b) for b = [0, e_1], binned by |e - b|.
std::vector<MomentEstimate> annealed_mixed_moment(const FieldSource& source, const LatticePtr& lat,
                                                  const AnnealedConfig& cfg);
std::vector<MomentEstimate> annealed_mixed_moment(const EnsembleSpec& spec, const LatticePtr& lat,
                                                  const AnnealedConfig& cfg);

/// Edges of the gradient and mixed bins; shared by the estimators and by
/// independent recomputations.
std::vector<Edge> gradient_bin_edges(const TorusLattice& lat, double R);
std::vector<Edge> mixed_bin_edges(const TorusLattice& lat, double R);

struct NashShell {
  int r = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t vertex_count = 0;
};

/// For shells r <= |x - y| < r + 1, r = 0 .. floor(L/4): extreme values of
/// G_T(x, y) (|x - y| + 1)^{d-2}. Only d >= 3 (DomainError otherwise).
std::vector<NashShell> nash_ratio_profile(const GreenColumn& col);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

/// Least squares of log(value) on log(r). At least 3 points, all positive.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

inline constexpr std::size_t kEnumerationMaxEdges = 20;

using FieldStatistic = std::function<double(const CoefficientField&, const DenseGreenOracle&)>;

/// Exact expectation of `statistic` under the uniform Bernoulli ensemble on
/// {lambda, 1}^{edges}: the mean over all 2^E fields, configuration k having
/// a(e) = 1 iff bit e of k is set. Each field is solved densely.
double enumeration_oracle(const LatticePtr& lat, double lambda, double T,
                          const FieldStatistic& statistic);

}  // namespace alab
