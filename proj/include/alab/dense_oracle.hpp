#pragma once

// Direct dense factorization of the massive operator, assembled edge by edge
// from the bilinear form sum_e a(e) grad u(e) grad v(e) + (1/T) sum_x u v.
// Independent of the matrix-free apply and the CG solve. Restricted to
// L^d <= 4096.

#include <Eigen/Dense>

#include "alab/coefficients.hpp"
#include "alab/fields.hpp"

namespace alab {

inline constexpr std::size_t kDenseOracleMaxVertices = 4096;

class DenseGreenOracle {
 public:
  /// DomainError above the vertex cap; ConfigError unless 0 < T < infinity.
  DenseGreenOracle(const CoefficientField& a, double T);

  static Eigen::MatrixXd assemble(const CoefficientField& a, double T);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  VertexField solve(const VertexField& rhs) const;
  /// G_T(., y).
  VertexField column(VertexId y) const;

 private:
  LatticePtr lat_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace alab
