#include "alab/lattice.hpp"

#include <cmath>
#include <string>

#include "alab/errors.hpp"

namespace alab {

namespace {

int wrap(long long x, int L) {
  long long r = x % L;
  return static_cast<int>(r < 0 ? r + L : r);
}

// Minimal image of a doubled coordinate difference, period 2L.
std::int64_t min_image2(std::int64_t delta, int L) {
  const std::int64_t period = 2 * static_cast<std::int64_t>(L);
  delta %= period;
  if (delta < 0) delta += period;
  if (delta > L) delta -= period;
  return delta;
}

}  // namespace

LatticePtr build_torus(int d, int L) {
  if (d < 1) throw ConfigError("lattice dimension must be >= 1, got " + std::to_string(d));
  if (L < 2) throw ConfigError("lattice side must be >= 2, got " + std::to_string(L));
  if (L % 2 != 0) throw ConfigError("lattice side must be even, got " + std::to_string(L));
  return std::make_shared<const TorusLattice>(d, L);
}

TorusLattice::TorusLattice(int d, int L) : d_(d), L_(L), n_vertices_(1) {
  if (d < 1 || L < 2 || L % 2 != 0) throw ConfigError("invalid torus shape");
  for (int i = 0; i < d; ++i) {
    if (n_vertices_ > (std::size_t{1} << 40) / static_cast<std::size_t>(L))
      throw ConfigError("lattice too large");
    n_vertices_ *= static_cast<std::size_t>(L);
  }
  const auto du = static_cast<std::size_t>(d);
  coords_.resize(n_vertices_ * du);
  for (VertexId v = 0; v < n_vertices_; ++v) {
    std::size_t rest = v;
    for (std::size_t i = 0; i < du; ++i) {
      coords_[v * du + i] = static_cast<int>(rest % static_cast<std::size_t>(L));
      rest /= static_cast<std::size_t>(L);
    }
  }
  fwd_.resize(n_vertices_ * du);
  bwd_.resize(n_vertices_ * du);
  std::size_t stride = 1;
  for (std::size_t i = 0; i < du; ++i) {
    for (VertexId v = 0; v < n_vertices_; ++v) {
      const int x = coords_[v * du + i];
      fwd_[i * n_vertices_ + v] = x == L - 1 ? v - (L - 1) * stride : v + stride;
      bwd_[i * n_vertices_ + v] = x == 0 ? v + (L - 1) * stride : v - stride;
    }
    stride *= static_cast<std::size_t>(L);
  }
}

VertexId TorusLattice::vertex(std::span<const int> x) const {
  if (x.size() != static_cast<std::size_t>(d_))
    throw DomainError("coordinate vector has wrong dimension");
  VertexId v = 0;
  for (std::size_t i = x.size(); i-- > 0;) v = v * static_cast<std::size_t>(L_) + wrap(x[i], L_);
  return v;
}

VertexId TorusLattice::translate(VertexId v, VertexId z) const {
  const auto cv = coords(v);
  const auto cz = coords(z);
  VertexId out = 0;
  for (std::size_t i = cv.size(); i-- > 0;)
    out = out * static_cast<std::size_t>(L_) + wrap(static_cast<long long>(cv[i]) + cz[i], L_);
  return out;
}

VertexId TorusLattice::negate(VertexId z) const {
  const auto cz = coords(z);
  VertexId out = 0;
  for (std::size_t i = cz.size(); i-- > 0;)
    out = out * static_cast<std::size_t>(L_) + wrap(-static_cast<long long>(cz[i]), L_);
  return out;
}

HalfPoint TorusLattice::point(VertexId v) const {
  HalfPoint p;
  p.twice.reserve(static_cast<std::size_t>(d_));
  for (int c : coords(v)) p.twice.push_back(2 * c);
  return p;
}

HalfPoint TorusLattice::midpoint(Edge e) const {
  HalfPoint p = point(e.base);
  p.twice[static_cast<std::size_t>(e.axis)] += 1;
  return p;
}

std::int64_t TorusLattice::sq4_distance(const HalfPoint& p, const HalfPoint& q) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < p.twice.size(); ++i) {
    const std::int64_t delta = min_image2(static_cast<std::int64_t>(p.twice[i]) - q.twice[i], L_);
    s += delta * delta;
  }
  return s;
}

std::int64_t TorusLattice::sq4_distance(Edge e, VertexId y) const {
  const auto ce = coords(e.base);
  const auto cy = coords(y);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < ce.size(); ++i) {
    std::int64_t delta = 2 * (static_cast<std::int64_t>(ce[i]) - cy[i]);
    if (static_cast<int>(i) == e.axis) delta += 1;
    delta = min_image2(delta, L_);
    s += delta * delta;
  }
  return s;
}

double TorusLattice::vertex_distance(VertexId x, VertexId y) const {
  return 0.5 * std::sqrt(static_cast<double>(sq4_distance(point(x), point(y))));
}

std::vector<Edge> TorusLattice::annulus_edges(VertexId y, double r_lo, double r_hi) const {
  if (!(r_lo >= 0.0) || !(r_hi > r_lo))
    throw DomainError("annulus radii must satisfy 0 <= R_lo < R_hi");
  if (r_hi > 0.5 * L_)
    throw DomainError("domain too small: annulus radius " + std::to_string(r_hi) +
                      " exceeds L/2 = " + std::to_string(L_ / 2));
  const double lo4 = 4.0 * r_lo * r_lo;
  const double hi4 = 4.0 * r_hi * r_hi;
  std::vector<Edge> out;
  for (std::size_t k = 0; k < num_edges(); ++k) {
    const Edge e = edge(k);
    const auto s = static_cast<double>(sq4_distance(e, y));
    if (s >= lo4 && s <= hi4) out.push_back(e);
  }
  return out;
}

std::vector<Edge> TorusLattice::edges_in_shell(const HalfPoint& centre, double lo,
                                               double hi) const {
  const double lo4 = 4.0 * lo * lo;
  const double hi4 = 4.0 * hi * hi;
  std::vector<Edge> out;
  for (std::size_t k = 0; k < num_edges(); ++k) {
    const Edge e = edge(k);
    const auto s = static_cast<double>(sq4_distance(midpoint(e), centre));
    if (s >= lo4 && s < hi4) out.push_back(e);
  }
  return out;
}

double edge_vertex_distance(const TorusLattice& lat, Edge e, VertexId y) {
  return 0.5 * std::sqrt(static_cast<double>(lat.sq4_distance(e, y)));
}

double edge_edge_distance(const TorusLattice& lat, Edge e, Edge b) {
  return 0.5 * std::sqrt(static_cast<double>(lat.sq4_distance(lat.midpoint(e), lat.midpoint(b))));
}

}  // namespace alab
