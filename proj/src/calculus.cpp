#include "alab/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace alab {

EdgeField grad(const VertexField& zeta) {
  const TorusLattice& lat = zeta.lattice();
  EdgeField out(zeta.lattice_ptr());
  const std::size_t n = lat.num_vertices();
  for (int i = 0; i < lat.dim(); ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * n;
    for (VertexId x = 0; x < n; ++x) out[off + x] = zeta[lat.forward(x, i)] - zeta[x];
  }
  return out;
}

VertexField div_star(const EdgeField& xi) {
  const TorusLattice& lat = xi.lattice();
  VertexField out(xi.lattice_ptr());
  const std::size_t n = lat.num_vertices();
  for (VertexId x = 0; x < n; ++x) {
    double s = 0.0;
    for (int i = 0; i < lat.dim(); ++i) {
      const std::size_t off = static_cast<std::size_t>(i) * n;
      s += xi[off + lat.backward(x, i)] - xi[off + x];
    }
    out[x] = s;
  }
  return out;
}

VertexField div_a_grad(const CoefficientField& a, const VertexField& u) {
  require_same_lattice(a.lattice(), u.lattice());
  const TorusLattice& lat = u.lattice();
  VertexField out(u.lattice_ptr());
  const std::size_t n = lat.num_vertices();
  for (VertexId x = 0; x < n; ++x) {
    double s = 0.0;
    for (int i = 0; i < lat.dim(); ++i) {
      const std::size_t off = static_cast<std::size_t>(i) * n;
      const VertexId xm = lat.backward(x, i);
      const VertexId xp = lat.forward(x, i);
      s += a[off + xm] * (u[x] - u[xm]) - a[off + x] * (u[xp] - u[x]);
    }
    out[x] = s;
  }
  return out;
}

Defect adjointness_defect(const VertexField& zeta, const EdgeField& xi) {
  require_same_lattice(zeta.lattice(), xi.lattice());
  const TorusLattice& lat = zeta.lattice();
  const EdgeField g = grad(zeta);
  const VertexField dv = div_star(xi);
  // Both sums are rearrangements of sum_e xi(e) (zeta(y) - zeta(x)); their
  // common magnitude scale is sum_e |xi(e)| (|zeta(x)| + |zeta(y)|).
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const Edge e = lat.edge(k);
    lhs += xi[k] * g[k];
    scale += std::abs(xi[k]) * (std::abs(zeta[e.base]) + std::abs(zeta[lat.head(e)]));
  }
  for (std::size_t x = 0; x < zeta.size(); ++x) rhs += zeta[x] * dv[x];
  Defect out;
  out.absolute = std::abs(lhs - rhs);
  out.relative = scale > 0.0 ? out.absolute / scale : 0.0;
  return out;
}

CutoffSpec::CutoffSpec(double radius, double q) : radius_(radius), q_(q) {
  if (!(radius > 0.0)) throw ConfigError("cut-off radius must be positive");
  if (!(q > 1.0)) throw ConfigError("Sobolev exponent q must exceed 1");
  r_ = (2.0 * q - 1.0) / (q - 1.0);
}

CutoffSpec CutoffSpec::for_dimension(double radius, int d) {
  return CutoffSpec(radius, (2.0 * d + 1.0) / (2.0 * d));
}

VertexField build_cutoff(const LatticePtr& lat, const CutoffSpec& spec, VertexId centre) {
  if (2.0 * spec.radius() > 0.5 * lat->side())
    throw DomainError("domain too small: cut-off support 2R exceeds L/2");
  VertexField eta(lat);
  for (VertexId x = 0; x < lat->num_vertices(); ++x) {
    const double s = lat->vertex_distance(x, centre) / spec.radius();
    const double mask = std::min(1.0, std::max(2.0 - s, 0.0));
    eta[x] = std::pow(mask, spec.r());
  }
  return eta;
}

namespace {

// Sum of |xi| over the 2d edges incident to x: the magnitude scale of div_star xi(x).
double incident_magnitude(const EdgeField& xi, VertexId x) {
  const TorusLattice& lat = xi.lattice();
  const std::size_t n = lat.num_vertices();
  double s = 0.0;
  for (int i = 0; i < lat.dim(); ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * n;
    s += std::abs(xi[off + lat.backward(x, i)]) + std::abs(xi[off + x]);
  }
  return s;
}

void accumulate(Defect& d, double defect, double scale) {
  defect = std::abs(defect);
  d.absolute = std::max(d.absolute, defect);
  if (scale > 0.0) d.relative = std::max(d.relative, defect / scale);
}

}  // namespace

Defect caccioppoli_identity_defect(const CoefficientField& a, const VertexField& u,
                                   const VertexField& eta) {
  require_same_lattice(a.lattice(), u.lattice());
  require_same_lattice(a.lattice(), eta.lattice());
  const TorusLattice& lat = u.lattice();
  Defect out;
  for (std::size_t k = 0; k < lat.num_edges(); ++k) {
    const Edge b = lat.edge(k);
    const VertexId x = b.base;
    const VertexId y = lat.head(b);
    const double ab = a[k];
    const double grad_u = u[y] - u[x];
    const double grad_eta2u = eta[y] * eta[y] * u[y] - eta[x] * eta[x] * u[x];
    const double grad_etau = eta[y] * u[y] - eta[x] * u[x];
    const double grad_eta = eta[y] - eta[x];
    const double t1 = grad_eta2u * ab * grad_u;
    const double t2 = grad_etau * ab * grad_etau;
    const double t3 = u[x] * u[y] * ab * grad_eta * grad_eta;
    // Scale from magnitudes before differencing.
    const double mag_eta2u = std::abs(eta[y] * eta[y] * u[y]) + std::abs(eta[x] * eta[x] * u[x]);
    const double mag_u = std::abs(u[y]) + std::abs(u[x]);
    const double mag_etau = std::abs(eta[y] * u[y]) + std::abs(eta[x] * u[x]);
    const double mag_eta = std::abs(eta[y]) + std::abs(eta[x]);
    const double scale = ab * (mag_eta2u * mag_u + mag_etau * mag_etau +
                               std::abs(u[x] * u[y]) * mag_eta * mag_eta);
    accumulate(out, t1 - t2 + t3, scale);
  }
  return out;
}

Defect leibniz_identity_defect(const CoefficientField& a, const VertexField& v,
                               const VertexField& eta) {
  require_same_lattice(a.lattice(), v.lattice());
  require_same_lattice(a.lattice(), eta.lattice());
  const TorusLattice& lat = v.lattice();
  const std::size_t n = lat.num_vertices();

  VertexField eta_v(v.lattice_ptr());
  for (std::size_t x = 0; x < n; ++x) eta_v[x] = eta[x] * v[x];
  const EdgeField grad_eta = grad(eta);
  const EdgeField grad_v = grad(v);

  EdgeField a_grad_etav = grad(eta_v);
  EdgeField a_v_grad_eta(v.lattice_ptr());
  EdgeField a_grad_v(v.lattice_ptr());
  for (std::size_t k = 0; k < lat.num_edges(); ++k) {
    const Edge e = lat.edge(k);
    a_grad_etav[k] *= a[k];
    a_v_grad_eta[k] = a[k] * v[e.base] * grad_eta[k];
    a_grad_v[k] = a[k] * grad_v[k];
  }
  const VertexField t1 = div_star(a_grad_etav);
  const VertexField t3 = div_star(a_v_grad_eta);
  const VertexField div_a_grad_v = div_star(a_grad_v);

  Defect out;
  for (VertexId x = 0; x < n; ++x) {
    double t2 = 0.0, t2_scale = 0.0;
    for (int j = 0; j < lat.dim(); ++j) {
      const std::size_t k = static_cast<std::size_t>(j) * n + x;
      const double term = grad_eta[k] * a[k] * grad_v[k];
      t2 += term;
      t2_scale += std::abs(term);
    }
    const double t4 = eta[x] * div_a_grad_v[x];
    const double scale = incident_magnitude(a_grad_etav, x) + t2_scale +
                         incident_magnitude(a_v_grad_eta, x) +
                         std::abs(eta[x]) * incident_magnitude(a_grad_v, x);
    accumulate(out, t1[x] + t2 - t3[x] - t4, scale);
  }
  return out;
}

double cutoff_gradient_bound_ratio(const LatticePtr& lat, const CutoffSpec& spec) {
  const VertexField eta = build_cutoff(lat, spec, lat->origin());
  const double R = spec.radius();
  const double exponent = (2.0 * spec.q() - 1.0) / spec.q();
  const double floor_term = std::pow(R, -spec.r());
  double worst = 0.0;
  for (std::size_t k = 0; k < lat->num_edges(); ++k) {
    const Edge b = lat->edge(k);
    const double ex = eta[b.base];
    const double ey = eta[lat->head(b)];
    const double num = std::pow(std::abs(R * (ey - ex)), exponent);
    worst = std::max(worst, num / (std::min(ex, ey) + floor_term));
  }
  return worst;
}

}  // namespace alab
