#include "bouss/green.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bouss {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

}  // namespace

GreenKernel::GreenKernel(double beta, double length)
    : beta_(beta), length_(length) {
  if (!(beta > 0.0)) throw ParameterError("GreenKernel: beta must be > 0");
  if (!(length > 0.0)) throw ParameterError("GreenKernel: length must be > 0");
  w_ = std::sqrt(beta / 6.0);
  inv_denom_ = 1.0 / (1.0 - std::exp(-2.0 * length_ / w_));
}

void GreenKernel::check_domain(double xi, double s) const {
  if (xi < 0.0 || xi > length_ || s < 0.0 || s > length_)
    throw DomainError("GreenKernel: arguments outside [0, L]");
}

double GreenKernel::g(double xi, double s) const {
  check_domain(xi, s);
  // sinh(a) sinh(b) / sinh(C) with a + b <= C, written in scaled exponentials.
  const double a = std::min(xi, s) / w_;
  const double b = (length_ - std::max(xi, s)) / w_;
  const double c = length_ / w_;
  return 0.5 / w_ * std::exp(a + b - c) * (1.0 - std::exp(-2.0 * a)) *
         (1.0 - std::exp(-2.0 * b)) * inv_denom_;
}

double GreenKernel::k(double xi, double s) const {
  check_domain(xi, s);
  if (xi == s) throw DomainError("GreenKernel: K is singular at xi == s");
  const double c = length_ / w_;
  if (s < xi) {
    // cosh(s/w) sinh((L - xi)/w) / (w^2 sinh(L/w))
    const double a = s / w_;
    const double b = (length_ - xi) / w_;
    return 0.5 / (w_ * w_) * std::exp(a + b - c) * (1.0 + std::exp(-2.0 * a)) *
           (1.0 - std::exp(-2.0 * b)) * inv_denom_;
  }
  // -sinh(xi/w) cosh((L - s)/w) / (w^2 sinh(L/w))
  const double a = xi / w_;
  const double b = (length_ - s) / w_;
  return -0.5 / (w_ * w_) * std::exp(a + b - c) * (1.0 - std::exp(-2.0 * a)) *
         (1.0 + std::exp(-2.0 * b)) * inv_denom_;
}

double GreenKernel::k_left(double xi) const {
  check_domain(xi, xi);
  const double a = xi / w_;
  const double b = (length_ - xi) / w_;
  const double c = length_ / w_;
  return 0.5 / (w_ * w_) * std::exp(a + b - c) * (1.0 + std::exp(-2.0 * a)) *
         (1.0 - std::exp(-2.0 * b)) * inv_denom_;
}

double GreenKernel::k_right(double xi) const {
  check_domain(xi, xi);
  const double a = xi / w_;
  const double b = (length_ - xi) / w_;
  const double c = length_ / w_;
  return -0.5 / (w_ * w_) * std::exp(a + b - c) * (1.0 - std::exp(-2.0 * a)) *
         (1.0 + std::exp(-2.0 * b)) * inv_denom_;
}

namespace {

// Row i of the discrete operator: trapezoid weights times kernel values, with
// the diagonal entry replaced by the two one-sided half-cell contributions.
std::vector<double> kernel_matrix(const GreenKernel& kernel, const SpatialMesh& mesh,
                                  PhiOperator which, bool pin_boundary_rows) {
  const int n = mesh.n_nodes();
  const double h = mesh.dx();
  const double x0 = mesh.x_left();
  std::vector<double> mat(st(n) * st(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (pin_boundary_rows && (i == 0 || i == n - 1)) continue;
    const double xi = mesh.node(i) - x0;
    double* row = mat.data() + st(i) * st(n);
    for (int j = 0; j < n; ++j) {
      const double wq = (j == 0 || j == n - 1) ? 0.5 * h : h;
      const double s = mesh.node(j) - x0;
      if (which == PhiOperator::phi1) {
        row[st(j)] = wq * kernel.g(xi, s);
      } else if (j != i) {
        row[st(j)] = wq * kernel.k(xi, s);
      } else {
        double v = 0.0;
        if (j > 0) v += 0.5 * h * kernel.k_left(xi);
        if (j < n - 1) v += 0.5 * h * kernel.k_right(xi);
        row[st(j)] = v;
      }
    }
  }
  return mat;
}

void matvec(const std::vector<double>& mat, const std::vector<double>& x,
            std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const double* row = mat.data() + st(i) * st(n);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += row[st(j)] * x[st(j)];
    y[st(i)] = acc;
  }
}

}  // namespace

ScalarField apply_phi(const GreenKernel& kernel, PhiOperator which,
                      const ScalarField& phi) {
  phi.require_finite("apply_phi");
  const SpatialMesh& mesh = phi.mesh();
  if (std::abs(mesh.length() - kernel.length()) > 1e-12 * kernel.length())
    throw ConfigError("apply_phi: field mesh does not span the kernel domain");
  const std::vector<double> mat = kernel_matrix(kernel, mesh, which, false);
  std::vector<double> out(st(mesh.n_nodes()), 0.0);
  matvec(mat, phi.values(), out);
  return phi.with_values(std::move(out));
}

Trajectory solve_linear_integral(const ModelParams& params, const ScalarField& c,
                                 const WaveState& init, const TimeGrid& grid) {
  params.validate();
  if (params.alpha_tilde != 0.0)
    throw ParameterError("solve_linear_integral: requires alpha_tilde = 0");
  grid.validate();
  c.require_finite("solve_linear_integral.c");
  init.require_same_mesh();
  if (!c.mesh().same_geometry(init.eta.mesh()))
    throw ConfigError("solve_linear_integral: mesh mismatch");

  const SpatialMesh& mesh = c.mesh();
  const int n = mesh.n_nodes();
  const GreenKernel kernel(params.beta, mesh.length());
  const std::vector<double> kmat =
      kernel_matrix(kernel, mesh, PhiOperator::phi2, true);

  const double dt = grid.dt();
  std::vector<double> nvec(init.eta.values());
  std::vector<double> vvec(init.vel.values());

  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(st(grid.n_steps + 1));
  traj.states.push_back(init);

  std::vector<double> cn(st(n)), kn1(st(n)), kn2(st(n));
  auto deriv = [&](const std::vector<double>& nx, const std::vector<double>& vx,
                   std::vector<double>& dn, std::vector<double>& dv) {
    matvec(kmat, vx, dn);
    for (int j = 0; j < n; ++j) cn[st(j)] = c[j] * nx[st(j)];
    matvec(kmat, cn, dv);
  };

  std::vector<double> k1n(st(n)), k1v(st(n)), k2n(st(n)), k2v(st(n));
  std::vector<double> k3n(st(n)), k3v(st(n)), k4n(st(n)), k4v(st(n));
  std::vector<double> tn(st(n)), tv(st(n));

  for (int step = 0; step < grid.n_steps; ++step) {
    deriv(nvec, vvec, k1n, k1v);
    for (int j = 0; j < n; ++j) {
      tn[st(j)] = nvec[st(j)] + 0.5 * dt * k1n[st(j)];
      tv[st(j)] = vvec[st(j)] + 0.5 * dt * k1v[st(j)];
    }
    deriv(tn, tv, k2n, k2v);
    for (int j = 0; j < n; ++j) {
      tn[st(j)] = nvec[st(j)] + 0.5 * dt * k2n[st(j)];
      tv[st(j)] = vvec[st(j)] + 0.5 * dt * k2v[st(j)];
    }
    deriv(tn, tv, k3n, k3v);
    for (int j = 0; j < n; ++j) {
      tn[st(j)] = nvec[st(j)] + dt * k3n[st(j)];
      tv[st(j)] = vvec[st(j)] + dt * k3v[st(j)];
    }
    deriv(tn, tv, k4n, k4v);
    double max_abs = 0.0;
    for (int j = 0; j < n; ++j) {
      nvec[st(j)] += dt / 6.0 *
                     (k1n[st(j)] + 2.0 * k2n[st(j)] + 2.0 * k3n[st(j)] + k4n[st(j)]);
      vvec[st(j)] += dt / 6.0 *
                     (k1v[st(j)] + 2.0 * k2v[st(j)] + 2.0 * k3v[st(j)] + k4v[st(j)]);
      max_abs = std::max({max_abs, std::abs(nvec[st(j)]), std::abs(vvec[st(j)])});
    }
    if (!(max_abs < 1e12))
      throw InstabilityError("solve_linear_integral: blow-up detected");
    traj.states.push_back(WaveState{ScalarField(init.eta.mesh_ptr(), nvec),
                                    ScalarField(init.vel.mesh_ptr(), vvec)});
  }
  return traj;
}

}  // namespace bouss
