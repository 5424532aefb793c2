#include "alab/dense_oracle.hpp"

#include <cmath>

namespace alab {

Eigen::MatrixXd DenseGreenOracle::assemble(const CoefficientField& a, double T) {
  const TorusLattice& lat = a.lattice();
  const std::size_t n = lat.num_vertices();
  if (n > kDenseOracleMaxVertices)
    throw DomainError("dense oracle limited to " + std::to_string(kDenseOracleMaxVertices) +
                      " vertices");
  if (!(T > 0.0) || std::isinf(T)) throw ConfigError("dense oracle needs finite T > 0");
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(ni, ni) / T;
  for (std::size_t k = 0; k < lat.num_edges(); ++k) {
    const Edge e = lat.edge(k);
    const auto x = static_cast<Eigen::Index>(e.base);
    const auto y = static_cast<Eigen::Index>(lat.head(e));
    m(x, x) += a[k];
    m(y, y) += a[k];
    m(x, y) -= a[k];
    m(y, x) -= a[k];
  }
  return m;
}

DenseGreenOracle::DenseGreenOracle(const CoefficientField& a, double T)
    : lat_(a.lattice_ptr()), matrix_(assemble(a, T)), lu_(matrix_) {}

VertexField DenseGreenOracle::solve(const VertexField& rhs) const {
  require_same_lattice(*lat_, rhs.lattice());
  const Eigen::Map<const Eigen::VectorXd> b(rhs.values().data(),
                                            static_cast<Eigen::Index>(rhs.size()));
  const Eigen::VectorXd x = lu_.solve(b);
  return VertexField(lat_, std::vector<double>(x.data(), x.data() + x.size()));
}

VertexField DenseGreenOracle::column(VertexId y) const {
  VertexField delta(lat_);
  delta[y] = 1.0;
  return solve(delta);
}

}  // namespace alab
