#pragma once

// Stationary coefficient ensembles <.> on Omega = [lambda, 1]^{edges}.
//
// sample_field(spec, lat, k) depends only on (spec, lattice shape, k): each
// sample draws from its own mt19937_64 stream keyed by std::seed_seq over
// (master seed, k). Samples can therefore be generated in any order or in
// parallel with identical results.

#include <cstdint>
#include <string>
#include <string_view>

#include "alab/coefficients.hpp"

namespace alab {

enum class EnsembleKind : std::int64_t {
  constant = 0,
  iid_uniform = 1,
  iid_bernoulli = 2,
  checkerboard = 3,
  // Sample k is the k-th configuration of {lambda, 1}^{edges}: a(e) = 1 iff
  // bit e of k is set. Indices 0 .. 2^E - 1 enumerate the uniform Bernoulli
  // ensemble exactly once each.
  bernoulli_enumeration = 4,
};

std::string_view to_string(EnsembleKind kind);
/// ConfigError on unknown names.
EnsembleKind ensemble_kind_from_string(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::iid_uniform;
  double lambda = 0.25;
  /// Value for the constant ensemble; must lie in [lambda, 1].
  double constant = 1.0;
  /// P(a = 1) for the Bernoulli ensemble.
  double p = 0.5;
  std::uint64_t seed = 0;

  /// ConfigError unless lambda in (0,1) and the kind's parameters are admissible.
  void validate() const;
  /// True for ensembles stationary under every lattice shift.
  bool fully_stationary() const { return kind != EnsembleKind::checkerboard; }
};

CoefficientField sample_field(const EnsembleSpec& spec, const LatticePtr& lat, std::int64_t index);

/// (shifted a)(e) = a(e + z).
CoefficientField shift_field(const CoefficientField& a, VertexId z);

}  // namespace alab
