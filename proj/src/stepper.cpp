#include "stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bouss::detail {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

void constrain_symmetric(TriDiagMatrix& a) {
  const int n = a.size();
  a.diag[0] = 1.0;
  a.super[0] = 0.0;
  a.sub[1] = 0.0;
  a.diag[st(n - 1)] = 1.0;
  a.sub[st(n - 1)] = 0.0;
  a.super[st(n - 2)] = 0.0;
}

}  // namespace

TriDiagMatrix constrained_h_operator(const SpatialMesh& mesh, double beta) {
  AssembledOperators ops = assemble(mesh, beta);
  TriDiagMatrix h(mesh.n_nodes());
  const double b6 = beta / 6.0;
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    h.sub[st(i)] = ops.mass.sub[st(i)] + b6 * ops.stiff.sub[st(i)];
    h.diag[st(i)] = ops.mass.diag[st(i)] + b6 * ops.stiff.diag[st(i)];
    h.super[st(i)] = ops.mass.super[st(i)] + b6 * ops.stiff.super[st(i)];
  }
  constrain_symmetric(h);
  return h;
}

TriDiagMatrix constrained_d_operator(const SpatialMesh& mesh) {
  const int n = mesh.n_nodes();
  TriDiagMatrix d(n);
  for (int i = 1; i < n - 1; ++i) {
    d.sub[st(i)] = 0.5;
    d.super[st(i)] = -0.5;
  }
  // Zero rows at the boundary and zero columns 0 and n-1.
  d.sub[1] = 0.0;
  d.super[st(n - 2)] = 0.0;
  return d;
}

ThetaStepper::ThetaStepper(const ModelParams& params, const SpatialMesh& mesh,
                           const TimeGrid& grid, const std::vector<double>& coeff)
    : n_(mesh.n_nodes()),
      dt_(grid.dt()),
      theta_(grid.theta),
      alpha_tilde_(params.alpha_tilde),
      m_(coeff),
      a_m_(n_),
      h_op_(constrained_h_operator(mesh, params.beta)),
      d_op_(constrained_d_operator(mesh)),
      scratch_w_(st(2 * n_)),
      scratch_f1_(st(n_)),
      scratch_f2_(st(n_)) {
  // The weighted term <M eta, phi> + (beta/6) <d(M eta), d phi> acts on the
  // P1 interpolant of the nodal product M*eta, so its matrix is the constant
  // weighted operator with columns scaled by M: A_M = H diag(M).
  for (int i = 0; i < n_; ++i) {
    if (i > 0) a_m_.sub[st(i)] = h_op_.sub[st(i)] * m_[st(i - 1)];
    a_m_.diag[st(i)] = h_op_.diag[st(i)] * m_[st(i)];
    if (i < n_ - 1) a_m_.super[st(i)] = h_op_.super[st(i)] * m_[st(i + 1)];
  }
}

std::vector<double> ThetaStepper::interleave(const std::vector<double>& eta,
                                             const std::vector<double>& u) {
  std::vector<double> x(2 * eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) {
    x[2 * j] = eta[j];
    x[2 * j + 1] = u[j];
  }
  return x;
}

void ThetaStepper::split(const std::vector<double>& x, std::vector<double>& eta,
                         std::vector<double>& u) {
  const std::size_t n = x.size() / 2;
  eta.resize(n);
  u.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    eta[j] = x[2 * j];
    u[j] = x[2 * j + 1];
  }
}

void ThetaStepper::flux(const std::vector<double>& x, std::vector<double>& f) const {
  // Nodewise products interpreted as P1 functions, then integrated against
  // the basis derivatives through D.
  std::vector<double>& wz = scratch_w_;
  for (int j = 0; j < n_; ++j) {
    const double eta = x[st(2 * j)];
    const double u = x[st(2 * j + 1)];
    const double m = m_[st(j)];
    wz[st(j)] = (1.0 + alpha_tilde_ * eta / m) * u;
    const double um = u / m;
    wz[st(n_ + j)] = eta + 0.5 * alpha_tilde_ * um * um;
  }
  std::vector<double>& f1 = scratch_f1_;
  std::vector<double>& f2 = scratch_f2_;
  f1.assign(st(n_), 0.0);
  f2.assign(st(n_), 0.0);
  for (int i = 1; i < n_ - 1; ++i) {
    const double sl = d_op_.sub[st(i)];
    const double sr = d_op_.super[st(i)];
    f1[st(i)] = sl * wz[st(i - 1)] + sr * wz[st(i + 1)];
    f2[st(i)] = sl * wz[st(n_ + i - 1)] + sr * wz[st(n_ + i + 1)];
  }
  f.resize(st(2 * n_));
  for (int j = 0; j < n_; ++j) {
    f[st(2 * j)] = f1[st(j)];
    f[st(2 * j + 1)] = f2[st(j)];
  }
}

void ThetaStepper::apply_block(const std::vector<double>& x,
                               std::vector<double>& y) const {
  y.resize(st(2 * n_));
  for (int i = 0; i < n_; ++i) {
    double acc_eta = a_m_.diag[st(i)] * x[st(2 * i)];
    double acc_u = h_op_.diag[st(i)] * x[st(2 * i + 1)];
    if (i > 0) {
      acc_eta += a_m_.sub[st(i)] * x[st(2 * (i - 1))];
      acc_u += h_op_.sub[st(i)] * x[st(2 * (i - 1) + 1)];
    }
    if (i < n_ - 1) {
      acc_eta += a_m_.super[st(i)] * x[st(2 * (i + 1))];
      acc_u += h_op_.super[st(i)] * x[st(2 * (i + 1) + 1)];
    }
    y[st(2 * i)] = acc_eta;
    y[st(2 * i + 1)] = acc_u;
  }
}

void ThetaStepper::step_rhs(const std::vector<double>& x_old,
                            std::vector<double>& rhs) const {
  apply_block(x_old, rhs);
  if (theta_ < 1.0) {
    std::vector<double> f;
    flux(x_old, f);
    const double c = dt_ * (1.0 - theta_);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += c * f[i];
  }
}

void ThetaStepper::residual(const std::vector<double>& x,
                            const std::vector<double>& rhs,
                            std::vector<double>& r) const {
  apply_block(x, r);
  std::vector<double> f;
  flux(x, f);
  const double c = dt_ * theta_;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * f[i] + rhs[i];
}

void ThetaStepper::assemble_jacobian(const std::vector<double>& x, double a,
                                     double b, BandedMatrix& jac) const {
  if (jac.size() != 2 * n_) jac = BandedMatrix(2 * n_, 3, 3);
  jac.clear();
  for (int i = 0; i < n_; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(n_ - 1, i + 1); ++j) {
      const double am = (j == i) ? a_m_.diag[st(i)]
                      : (j == i - 1) ? a_m_.sub[st(i)] : a_m_.super[st(i)];
      const double hh = (j == i) ? h_op_.diag[st(i)]
                      : (j == i - 1) ? h_op_.sub[st(i)] : h_op_.super[st(i)];
      const double dd = (j == i) ? 0.0
                      : (j == i - 1) ? d_op_.sub[st(i)] : d_op_.super[st(i)];
      const double eta_j = x[st(2 * j)];
      const double u_j = x[st(2 * j + 1)];
      const double m_j = m_[st(j)];
      const double dw_deta = alpha_tilde_ * u_j / m_j;
      const double dw_du = 1.0 + alpha_tilde_ * eta_j / m_j;
      const double dz_du = alpha_tilde_ * u_j / (m_j * m_j);
      jac.set(2 * i, 2 * j, a * am + b * dd * dw_deta);
      jac.set(2 * i, 2 * j + 1, b * dd * dw_du);
      jac.set(2 * i + 1, 2 * j, b * dd);
      jac.set(2 * i + 1, 2 * j + 1, a * hh + b * dd * dz_du);
    }
  }
}

std::vector<double> ThetaStepper::newton_step(const std::vector<double>& x_old,
                                              const NewtonConfig& newton,
                                              int step_index) const {
  std::vector<double> rhs;
  step_rhs(x_old, rhs);
  std::vector<double> x = x_old;
  std::vector<double> r;
  BandedMatrix jac;
  double res_norm = 0.0;
  for (int it = 0; it <= newton.max_iters; ++it) {
    residual(x, rhs, r);
    res_norm = 0.0;
    for (double v : r) res_norm = std::max(res_norm, std::abs(v));
    if (res_norm <= newton.abs_tol) return x;
    if (it == newton.max_iters) break;
    newton_jacobian(x, jac);
    BandedLU lu(jac);
    for (double& v : r) v = -v;
    lu.solve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += r[i];
  }
  throw StepFailureError(
      "step_theta: Newton failed to reach tolerance at step " +
          std::to_string(step_index) + " (residual " + std::to_string(res_norm) +
          "); refine dt/dx",
      step_index, res_norm);
}

void ThetaStepper::accumulate_coeff_gradient(const std::vector<double>& lambda,
                                             const std::vector<double>& x_old,
                                             const std::vector<double>& x_new,
                                             std::vector<double>& grad_m) const {
  // d(A_M eta)/dM_j = H e_j eta_j, so the weighted-operator part contributes
  // (H lambda_1)_j (eta_new - eta_old)_j; the pinned boundary differences are
  // zero, which matches the M-independent constraint rows.
  std::vector<double>& l1 = scratch_f1_;
  for (int j = 0; j < n_; ++j) l1[st(j)] = lambda[st(2 * j)];
  std::vector<double>& hl1 = scratch_f2_;
  h_op_.multiply(l1, hl1);
  for (int j = 0; j < n_; ++j)
    grad_m[st(j)] += hl1[st(j)] * (x_new[st(2 * j)] - x_old[st(2 * j)]);

  if (alpha_tilde_ == 0.0) return;

  // Nonlinear terms: dG/dM_j = -dt*[theta dflux(x_new) + (1-theta) dflux(x_old)]/dM_j.
  std::vector<double> dt_l1(st(n_), 0.0), dt_l2(st(n_), 0.0);
  for (int i = 1; i < n_ - 1; ++i) {
    const double sl = d_op_.sub[st(i)];
    const double sr = d_op_.super[st(i)];
    if (sl != 0.0) {
      dt_l1[st(i - 1)] += sl * lambda[st(2 * i)];
      dt_l2[st(i - 1)] += sl * lambda[st(2 * i + 1)];
    }
    if (sr != 0.0) {
      dt_l1[st(i + 1)] += sr * lambda[st(2 * i)];
      dt_l2[st(i + 1)] += sr * lambda[st(2 * i + 1)];
    }
  }
  const double cn = dt_ * theta_;
  const double co = dt_ * (1.0 - theta_);
  for (int j = 0; j < n_; ++j) {
    const double m = m_[st(j)];
    const double m2 = m * m;
    const double eta_n = x_new[st(2 * j)], u_n = x_new[st(2 * j + 1)];
    const double eta_o = x_old[st(2 * j)], u_o = x_old[st(2 * j + 1)];
    const double dw = cn * eta_n * u_n + co * eta_o * u_o;
    const double dz = cn * u_n * u_n + co * u_o * u_o;
    grad_m[st(j)] += alpha_tilde_ * (dw * dt_l1[st(j)] / m2 +
                                     dz * dt_l2[st(j)] / (m2 * m));
  }
}

}  // namespace bouss::detail
