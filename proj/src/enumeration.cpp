#include <cmath>
#include <string>

#include "alab/estimators.hpp"

namespace alab {

double enumeration_oracle(const LatticePtr& lat, double lambda, double T,
                          const FieldStatistic& statistic) {
  const std::size_t n_edges = lat->num_edges();
  if (n_edges > kEnumerationMaxEdges)
    throw DomainError("cost guard: enumeration over " + std::to_string(n_edges) +
                      " edges exceeds the limit of " + std::to_string(kEnumerationMaxEdges));
  const std::uint64_t count = std::uint64_t{1} << n_edges;
  // Compensated sum.
  double sum = 0.0, carry = 0.0;
  for (std::uint64_t k = 0; k < count; ++k) {
    EdgeField a(lat);
    for (std::size_t e = 0; e < n_edges; ++e) a[e] = ((k >> e) & 1u) ? 1.0 : lambda;
    const CoefficientField field(std::move(a), lambda);
    const DenseGreenOracle oracle(field, T);
    const double y = statistic(field, oracle) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(count);
}

}  // namespace alab
