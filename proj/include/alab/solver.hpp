#pragma once

// The massive operator (1/T + div_star a grad) on the torus, its
// preconditioned conjugate-gradient solve, and Green columns
//   (1/T + div_star a grad) G_T(., y) = delta(. - y).

#include <span>

#include "alab/coefficients.hpp"
#include "alab/fields.hpp"

namespace alab {

enum class Preconditioner { none, diagonal };

struct SolverConfig {
  double rel_tol = 1e-10;
  int max_iter = 100000;
  Preconditioner preconditioner = Preconditioner::diagonal;

  void validate() const;
};

/// Symmetric positive definite for finite T > 0; smallest eigenvalue >= 1/T.
/// T = +infinity switches the mass term off (apply only, not solvable).
class MassiveOperator {
 public:
  MassiveOperator(CoefficientField a, double T);

  const CoefficientField& coefficients() const noexcept { return a_; }
  const TorusLattice& lattice() const noexcept { return a_.lattice(); }
  double T() const noexcept { return T_; }
  double mass() const noexcept { return mass_; }

  VertexField apply(const VertexField& u) const;
  void apply(std::span<const double> u, std::span<double> out) const;
  /// Diagonal entries 1/T + sum of the 2d incident conductances.
  std::vector<double> diagonal() const;

 private:
  CoefficientField a_;
  double T_;
  double mass_;
};

struct SolveResult {
  VertexField solution;
  /// ||op(u) - rhs||_2 / ||rhs||_2 evaluated on the returned solution.
  double residual = 0.0;
  int iterations = 0;
};

/// Throws SolverError when max_iter is exhausted.
SolveResult solve(const MassiveOperator& op, const VertexField& rhs, const SolverConfig& cfg);

struct GreenColumn {
  VertexId source = 0;
  double T = 0.0;
  VertexField values;
  double residual = 0.0;
  int iterations = 0;
  FieldProvenance provenance;
};

GreenColumn green_column(const CoefficientField& a, double T, VertexId y, const SolverConfig& cfg);

/// e -> grad_x G_T(e, y).
EdgeField grad_green(const GreenColumn& col);

/// e -> grad grad G_T(e, b) for b = [y, y + e_j], i.e. the edge gradient of
/// G_T(., y + e_j) - G_T(., y). Two solves.
EdgeField mixed_grad_green(const CoefficientField& a, double T, Edge b, const SolverConfig& cfg);

/// Same quantity from already solved columns at the tail and head of b.
EdgeField mixed_grad_from_columns(const GreenColumn& tail, const GreenColumn& head);

}  // namespace alab
