#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "alab/coefficients.hpp"
#include "alab/fields.hpp"
#include "alab/lattice.hpp"

namespace testing {

inline std::mt19937_64 rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x74657374u};
  return std::mt19937_64(seq);
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline alab::VertexField random_vertex_field(const alab::LatticePtr& lat, std::mt19937_64& g) {
  alab::VertexField f(lat);
  for (double& v : f.values()) v = uniform(g, -1.0, 1.0);
  return f;
}

inline alab::EdgeField random_edge_field(const alab::LatticePtr& lat, std::mt19937_64& g) {
  alab::EdgeField f(lat);
  for (double& v : f.values()) v = uniform(g, -1.0, 1.0);
  return f;
}

inline alab::CoefficientField random_coefficients(const alab::LatticePtr& lat, double lambda,
                                                  std::mt19937_64& g) {
  alab::EdgeField a(lat);
  for (double& v : a.values()) v = uniform(g, lambda, 1.0);
  return alab::CoefficientField(std::move(a), lambda);
}

/// Coordinates of v computed from the numbering rule, without lattice tables.
inline std::vector<int> coords_of(std::size_t v, int d, int L) {
  std::vector<int> x(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    x[static_cast<std::size_t>(i)] = static_cast<int>(v % static_cast<std::size_t>(L));
    v /= static_cast<std::size_t>(L);
  }
  return x;
}

inline std::size_t index_of(const std::vector<int>& x, int L) {
  std::size_t v = 0;
  for (std::size_t i = x.size(); i-- > 0;) v = v * static_cast<std::size_t>(L) + static_cast<std::size_t>(((x[i] % L) + L) % L);
  return v;
}

inline std::size_t step(std::size_t v, int axis, int delta, int d, int L) {
  auto x = coords_of(v, d, L);
  x[static_cast<std::size_t>(axis)] += delta;
  return index_of(x, L);
}

/// Minimal-image distance between two real points of the torus.
inline double torus_distance(const std::vector<double>& p, const std::vector<double>& q, int L) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double t = std::fmod(std::abs(p[i] - q[i]), static_cast<double>(L));
    t = std::min(t, L - t);
    s += t * t;
  }
  return std::sqrt(s);
}

inline std::vector<double> edge_midpoint(std::size_t edge_index, int d, int L) {
  const std::size_t n = static_cast<std::size_t>(std::pow(L, d));
  const auto x = coords_of(edge_index % n, d, L);
  std::vector<double> m(x.begin(), x.end());
  m[edge_index / n] += 0.5;
  return m;
}

inline std::vector<double> vertex_point(std::size_t v, int d, int L) {
  const auto x = coords_of(v, d, L);
  return {x.begin(), x.end()};
}

inline double rel_sup_diff(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace testing
