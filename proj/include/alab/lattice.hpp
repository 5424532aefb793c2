#pragma once

// Periodic cubic lattice (Z/LZ)^d standing in for Z^d.
//
// Vertices are numbered lexicographically with axis 0 fastest:
//   v = x_0 + L x_1 + L^2 x_2 + ...
// Every vertex owns d forward edges [x, x + e_i]. Edges are numbered
// axis-major: edge index = i * L^d + v. This is the canonical edge order used
// by every EdgeField and by the binary record format.
//
// Distances use the minimal-image convention. Edge midpoints have half-integer
// coordinates, so points are stored doubled (HalfPoint) and squared distances
// are carried as exact integers equal to 4 |p - q|^2.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace alab {

using VertexId = std::size_t;

/// Forward edge [base, base + e_axis]; axis is 0-based.
struct Edge {
  VertexId base = 0;
  int axis = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A point of (Z/2)^d stored as twice its coordinates.
struct HalfPoint {
  std::vector<int> twice;
};

class TorusLattice;
using LatticePtr = std::shared_ptr<const TorusLattice>;

/// Rejects odd L, L < 2 and d < 1 with ConfigError.
LatticePtr build_torus(int d, int L);

class TorusLattice {
 public:
  TorusLattice(int d, int L);

  int dim() const noexcept { return d_; }
  int side() const noexcept { return L_; }
  std::size_t num_vertices() const noexcept { return n_vertices_; }
  std::size_t num_edges() const noexcept { return n_vertices_ * static_cast<std::size_t>(d_); }

  std::span<const int> coords(VertexId v) const {
    return {coords_.data() + v * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  /// Coordinates are reduced mod L, so any integer vector is accepted.
  VertexId vertex(std::span<const int> x) const;
  VertexId origin() const noexcept { return 0; }

  VertexId forward(VertexId v, int axis) const noexcept {
    return fwd_[static_cast<std::size_t>(axis) * n_vertices_ + v];
  }
  VertexId backward(VertexId v, int axis) const noexcept {
    return bwd_[static_cast<std::size_t>(axis) * n_vertices_ + v];
  }

  std::size_t edge_index(Edge e) const noexcept {
    return static_cast<std::size_t>(e.axis) * n_vertices_ + e.base;
  }
  Edge edge(std::size_t index) const noexcept {
    return {index % n_vertices_, static_cast<int>(index / n_vertices_)};
  }
  VertexId head(Edge e) const noexcept { return forward(e.base, e.axis); }

  /// v + z and e + z.
  VertexId translate(VertexId v, VertexId z) const;
  Edge translate(Edge e, VertexId z) const { return {translate(e.base, z), e.axis}; }
  /// -z.
  VertexId negate(VertexId z) const;

  HalfPoint point(VertexId v) const;
  HalfPoint midpoint(Edge e) const;

  /// 4 |p - q|^2 under the minimal image.
  std::int64_t sq4_distance(const HalfPoint& p, const HalfPoint& q) const;
  std::int64_t sq4_distance(Edge e, VertexId y) const;

  double vertex_distance(VertexId x, VertexId y) const;

  /// Closed annulus R_lo <= |e - y| <= R_hi in canonical edge order.
  /// Requires 0 <= R_lo < R_hi <= L/2 (DomainError otherwise).
  std::vector<Edge> annulus_edges(VertexId y, double r_lo, double r_hi) const;
  /// Edges with lo <= |e - c| < hi around an arbitrary half-integer centre.
  std::vector<Edge> edges_in_shell(const HalfPoint& centre, double lo, double hi) const;

 private:
  int d_;
  int L_;
  std::size_t n_vertices_;
  std::vector<int> coords_;
  std::vector<VertexId> fwd_;
  std::vector<VertexId> bwd_;
};

/// |e - y|: distance from y to the midpoint of e.
double edge_vertex_distance(const TorusLattice& lat, Edge e, VertexId y);
/// |e - b|: distance between the two midpoints.
double edge_edge_distance(const TorusLattice& lat, Edge e, Edge b);

inline std::vector<Edge> annulus_edges(const TorusLattice& lat, VertexId y, double r_lo,
                                       double r_hi) {
  return lat.annulus_edges(y, r_lo, r_hi);
}

}  // namespace alab
