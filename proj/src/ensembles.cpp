#include "alab/ensembles.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace alab {

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::constant: return "constant";
    case EnsembleKind::iid_uniform: return "iid_uniform";
    case EnsembleKind::iid_bernoulli: return "iid_bernoulli";
    case EnsembleKind::checkerboard: return "checkerboard";
    case EnsembleKind::bernoulli_enumeration: return "bernoulli_enumeration";
  }
  return "unknown";
}

EnsembleKind ensemble_kind_from_string(std::string_view name) {
  for (auto k : {EnsembleKind::constant, EnsembleKind::iid_uniform, EnsembleKind::iid_bernoulli,
                 EnsembleKind::checkerboard, EnsembleKind::bernoulli_enumeration})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown ensemble kind '" + std::string(name) + "'");
}

void EnsembleSpec::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw ConfigError("ellipticity ratio lambda must lie in (0, 1), got " + std::to_string(lambda));
  if (kind == EnsembleKind::constant && !(constant >= lambda && constant <= 1.0))
    throw ConfigError("constant conductance must lie in [lambda, 1]");
  if (kind == EnsembleKind::iid_bernoulli && !(p >= 0.0 && p <= 1.0))
    throw ConfigError("Bernoulli parameter p must lie in [0, 1]");
}

namespace {

// Uniform on [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::int64_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
                    0x616c6162u};
  return std::mt19937_64(seq);
}

}  // namespace

CoefficientField sample_field(const EnsembleSpec& spec, const LatticePtr& lat,
                              std::int64_t index) {
  spec.validate();
  if (index < 0) throw ConfigError("sample index must be non-negative");
  const double lambda = spec.lambda;
  EdgeField a(lat);
  switch (spec.kind) {
    case EnsembleKind::constant:
      for (auto& v : a.values()) v = spec.constant;
      break;
    case EnsembleKind::iid_uniform: {
      auto gen = sample_stream(spec.seed, index);
      for (auto& v : a.values()) v = std::min(1.0, lambda + (1.0 - lambda) * unit_uniform(gen));
      break;
    }
    case EnsembleKind::iid_bernoulli: {
      auto gen = sample_stream(spec.seed, index);
      for (auto& v : a.values()) v = unit_uniform(gen) < spec.p ? 1.0 : lambda;
      break;
    }
    case EnsembleKind::checkerboard:
      for (std::size_t k = 0; k < lat->num_edges(); ++k) {
        int parity = 0;
        for (int c : lat->coords(lat->edge(k).base)) parity += c;
        a[k] = parity % 2 == 0 ? 1.0 : lambda;
      }
      break;
    case EnsembleKind::bernoulli_enumeration: {
      const std::size_t n_edges = lat->num_edges();
      if (n_edges < 63 && static_cast<std::uint64_t>(index) >= (std::uint64_t{1} << n_edges))
        throw ConfigError("enumeration index exceeds 2^edges");
      const auto bits = static_cast<std::uint64_t>(index);
      for (std::size_t k = 0; k < n_edges; ++k)
        a[k] = (k < 64 && ((bits >> k) & 1u)) ? 1.0 : lambda;
      break;
    }
  }
  return CoefficientField(std::move(a), lambda,
                          {static_cast<std::int64_t>(spec.kind), spec.seed, index});
}

CoefficientField shift_field(const CoefficientField& a, VertexId z) {
  const TorusLattice& lat = a.lattice();
  EdgeField out(a.lattice_ptr());
  for (std::size_t k = 0; k < lat.num_edges(); ++k)
    out[k] = a[lat.edge_index(lat.translate(lat.edge(k), z))];
  return CoefficientField(std::move(out), a.lambda(), a.provenance());
}

}  // namespace alab
