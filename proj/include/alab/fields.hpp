#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alab/errors.hpp"
#include "alab/lattice.hpp"

namespace alab {

enum class FieldSite { vertex, edge };

/// One real value per vertex (zeta) or per edge (xi) of a torus, in the
/// lattice's canonical order.
template <FieldSite Site>
class LatticeField {
 public:
  explicit LatticeField(LatticePtr lat, double fill = 0.0)
      : lat_(std::move(lat)), values_(expected_size(*lat_), fill) {}

  LatticeField(LatticePtr lat, std::vector<double> values)
      : lat_(std::move(lat)), values_(std::move(values)) {
    if (values_.size() != expected_size(*lat_))
      throw DomainError("field length " + std::to_string(values_.size()) +
                        " does not match lattice (" + std::to_string(expected_size(*lat_)) + ")");
  }

  static std::size_t expected_size(const TorusLattice& lat) {
    return Site == FieldSite::vertex ? lat.num_vertices() : lat.num_edges();
  }

  const TorusLattice& lattice() const noexcept { return *lat_; }
  const LatticePtr& lattice_ptr() const noexcept { return lat_; }

  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double& at(Edge e) noexcept
    requires(Site == FieldSite::edge)
  {
    return values_[lat_->edge_index(e)];
  }
  double at(Edge e) const noexcept
    requires(Site == FieldSite::edge)
  {
    return values_[lat_->edge_index(e)];
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  LatticePtr lat_;
  std::vector<double> values_;
};

using VertexField = LatticeField<FieldSite::vertex>;
using EdgeField = LatticeField<FieldSite::edge>;

inline bool same_lattice(const TorusLattice& a, const TorusLattice& b) {
  return &a == &b || (a.dim() == b.dim() && a.side() == b.side());
}

inline void require_same_lattice(const TorusLattice& a, const TorusLattice& b) {
  if (!same_lattice(a, b)) throw DomainError("fields live on different lattices");
}

}  // namespace alab
