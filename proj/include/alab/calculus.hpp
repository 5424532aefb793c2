#pragma once

// Discrete gradient and (negative) divergence on the torus, and the exact
// algebraic identities used by the Green function estimates:
//
//   grad zeta([x, x+e_i]) = zeta(x+e_i) - zeta(x)
//   div_star xi(x)        = sum_i xi([x-e_i, x]) - xi([x, x+e_i])
//
// with sum_e xi grad zeta = sum_x zeta div_star xi.

#include "alab/coefficients.hpp"
#include "alab/fields.hpp"

namespace alab {

EdgeField grad(const VertexField& zeta);
VertexField div_star(const EdgeField& xi);

/// div_star(a grad u) without materializing the edge field.
VertexField div_a_grad(const CoefficientField& a, const VertexField& u);

/// Result of an identity check. `absolute` is the largest raw defect;
/// `relative` is the largest defect divided by the magnitude of the terms
/// that produced it (elements whose terms all vanish contribute zero).
struct Defect {
  double absolute = 0.0;
  double relative = 0.0;
};

/// |sum_e xi grad zeta - sum_x zeta div_star xi|, scaled by the sum of the
/// absolute summands on both sides.
Defect adjointness_defect(const VertexField& zeta, const EdgeField& xi);

/// Cut-off eta = hat_zeta(|x - centre| / R)^r with the plateau mask
/// hat_zeta(s) = min{1, max{2 - s, 0}} and 1/(r-1) + 1/q = 1.
class CutoffSpec {
 public:
  /// R > 0 and q > 1, else ConfigError.
  CutoffSpec(double radius, double q);

  /// q = (2d+1)/(2d), the largest exponent giving r >= 2d + 2.
  static CutoffSpec for_dimension(double radius, int d);

  double radius() const noexcept { return radius_; }
  double q() const noexcept { return q_; }
  /// (2q - 1)/(q - 1).
  double r() const noexcept { return r_; }

 private:
  double radius_;
  double q_;
  double r_;
};

/// Requires 2R <= L/2 (DomainError).
VertexField build_cutoff(const LatticePtr& lat, const CutoffSpec& spec, VertexId centre);

/// Edge-wise defect of
///   grad(eta^2 u) a grad u = grad(eta u) a grad(eta u) - u(x) u(y) a (grad eta)^2
/// maximized over edges b = [x, y].
Defect caccioppoli_identity_defect(const CoefficientField& a, const VertexField& u,
                                   const VertexField& eta);

/// Vertex-wise defect of the discrete product rule
///   div_star(a grad(eta v)) + sum_j grad eta a grad v  =  div_star(a v grad eta) + eta div_star(a grad v)
/// where (a v grad eta)([x, x+e_j]) = a v(x) grad eta, maximized over vertices.
Defect leibniz_identity_defect(const CoefficientField& a, const VertexField& v,
                               const VertexField& eta);

/// max over edges b = [x,y] of |R grad eta(b)|^{(2q-1)/q} / (min{eta(x), eta(y)} + R^{-r})
/// for the cut-off centred at the origin.
double cutoff_gradient_bound_ratio(const LatticePtr& lat, const CutoffSpec& spec);

}  // namespace alab
