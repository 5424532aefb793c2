#include "alab/solver.hpp"

#include <cmath>
#include <string>

#include "alab/calculus.hpp"

namespace alab {

namespace {

// Plain left-to-right sums.
double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("solver rel_tol must lie in (0, 1)");
  if (max_iter < 1) throw ConfigError("solver max_iter must be positive");
}

MassiveOperator::MassiveOperator(CoefficientField a, double T)
    : a_(std::move(a)), T_(T), mass_(std::isinf(T) ? 0.0 : 1.0 / T) {
  if (!(T > 0.0)) throw ConfigError("massive parameter T must be positive");
}

VertexField MassiveOperator::apply(const VertexField& u) const {
  require_same_lattice(lattice(), u.lattice());
  VertexField out(u.lattice_ptr());
  apply(u.values(), out.values());
  return out;
}

void MassiveOperator::apply(std::span<const double> u, std::span<double> out) const {
  const TorusLattice& lat = lattice();
  const std::size_t n = lat.num_vertices();
  const double* a = a_.conductance().values().data();
  for (std::size_t x = 0; x < n; ++x) out[x] = mass_ * u[x];
  for (int i = 0; i < lat.dim(); ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * n;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t xp = lat.forward(x, i);
      const std::size_t xm = lat.backward(x, i);
      out[x] += ai[xm] * (u[x] - u[xm]) - ai[x] * (u[xp] - u[x]);
    }
  }
}

std::vector<double> MassiveOperator::diagonal() const {
  const TorusLattice& lat = lattice();
  const std::size_t n = lat.num_vertices();
  std::vector<double> diag(n, mass_);
  for (int i = 0; i < lat.dim(); ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * n;
    for (std::size_t x = 0; x < n; ++x) diag[x] += a_[off + lat.backward(x, i)] + a_[off + x];
  }
  return diag;
}

SolveResult solve(const MassiveOperator& op, const VertexField& rhs, const SolverConfig& cfg) {
  cfg.validate();
  require_same_lattice(op.lattice(), rhs.lattice());
  if (!(op.mass() > 0.0)) throw ConfigError("solve requires a finite massive parameter T");

  const std::size_t n = rhs.size();
  SolveResult res{VertexField(rhs.lattice_ptr()), 0.0, 0};
  std::span<double> x = res.solution.values();
  const std::span<const double> b = rhs.values();
  const double b_norm = norm2(b);
  if (b_norm == 0.0) return res;

  std::vector<double> inv_diag(n, 1.0);
  if (cfg.preconditioner == Preconditioner::diagonal) {
    inv_diag = op.diagonal();
    for (double& v : inv_diag) v = 1.0 / v;
  }

  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  auto precondition = [&] {
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  };
  precondition();
  p = z;
  double rz = dot(r, z);
  const double target = cfg.rel_tol * b_norm;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    op.apply(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (norm2(r) <= target) {
      // Confirm on the true residual b - Ax; restart from it otherwise.
      op.apply(x, q);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
      const double true_norm = norm2(r);
      if (true_norm <= target) {
        res.residual = true_norm / b_norm;
        res.iterations = it;
        return res;
      }
      precondition();
      p = z;
      rz = dot(r, z);
      continue;
    }
    precondition();
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  op.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double final_residual = norm2(r) / b_norm;
  throw SolverError("conjugate gradient did not converge in " + std::to_string(cfg.max_iter) +
                        " iterations (relative residual " + std::to_string(final_residual) + ")",
                    final_residual, cfg.max_iter);
}

GreenColumn green_column(const CoefficientField& a, double T, VertexId y, const SolverConfig& cfg) {
  if (!(T > 0.0) || std::isinf(T)) throw ConfigError("massive parameter T must be finite and positive");
  if (y >= a.lattice().num_vertices()) throw DomainError("source vertex outside lattice");
  const MassiveOperator op(a, T);
  VertexField delta(a.lattice_ptr());
  delta[y] = 1.0;
  SolveResult res = solve(op, delta, cfg);
  return GreenColumn{y, T, std::move(res.solution), res.residual, res.iterations, a.provenance()};
}

EdgeField grad_green(const GreenColumn& col) { return grad(col.values); }

EdgeField mixed_grad_from_columns(const GreenColumn& tail, const GreenColumn& head) {
  require_same_lattice(tail.values.lattice(), head.values.lattice());
  VertexField diff(tail.values.lattice_ptr());
  for (std::size_t x = 0; x < diff.size(); ++x) diff[x] = head.values[x] - tail.values[x];
  return grad(diff);
}

EdgeField mixed_grad_green(const CoefficientField& a, double T, Edge b, const SolverConfig& cfg) {
  const GreenColumn tail = green_column(a, T, b.base, cfg);
  const GreenColumn head = green_column(a, T, a.lattice().head(b), cfg);
  return mixed_grad_from_columns(tail, head);
}

}  // namespace alab
