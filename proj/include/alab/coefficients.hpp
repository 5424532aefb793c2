#pragma once

#include <cstdint>

#include "alab/fields.hpp"

namespace alab {

/// Where a coefficient field came from; carried into binary records.
struct FieldProvenance {
  std::int64_t kind_tag = 0;
  std::uint64_t seed = 0;
  std::int64_t index = 0;
};

/// A member of Omega = [lambda, 1]^{edges}: one conductance per edge.
class CoefficientField {
 public:
  /// Throws ConfigError if lambda is not in (0, 1] and DomainError if any
  /// conductance leaves [lambda, 1].
  CoefficientField(EdgeField conductance, double lambda, FieldProvenance provenance = {});

  /// a == c everywhere; lambda defaults to c.
  static CoefficientField constant(LatticePtr lat, double c, double lambda = -1.0);

  const TorusLattice& lattice() const noexcept { return values_.lattice(); }
  const LatticePtr& lattice_ptr() const noexcept { return values_.lattice_ptr(); }
  const EdgeField& conductance() const noexcept { return values_; }
  double operator[](std::size_t edge_index) const noexcept { return values_[edge_index]; }
  double at(Edge e) const noexcept { return values_.at(e); }
  double lambda() const noexcept { return lambda_; }
  const FieldProvenance& provenance() const noexcept { return provenance_; }

 private:
  EdgeField values_;
  double lambda_;
  FieldProvenance provenance_;
};

}  // namespace alab
