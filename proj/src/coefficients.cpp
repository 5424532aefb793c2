#include "alab/coefficients.hpp"

#include <string>
#include <utility>

namespace alab {

CoefficientField::CoefficientField(EdgeField conductance, double lambda,
                                   FieldProvenance provenance)
    : values_(std::move(conductance)), lambda_(lambda), provenance_(provenance) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw ConfigError("ellipticity ratio must lie in (0, 1], got " + std::to_string(lambda));
  for (double v : values_.values())
    if (!(v >= lambda && v <= 1.0))
      throw DomainError("conductance " + std::to_string(v) + " outside [lambda, 1]");
}

CoefficientField CoefficientField::constant(LatticePtr lat, double c, double lambda) {
  return CoefficientField(EdgeField(std::move(lat), c), lambda < 0.0 ? c : lambda);
}

}  // namespace alab
