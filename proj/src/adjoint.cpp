#include "bouss/adjoint.hpp"

#include <algorithm>
#include <cmath>

#include "bouss/banded.hpp"
#include "bouss/optim.hpp"
#include "stepper.hpp"

namespace bouss {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

// Element slopes averaged to nodes, one-sided at the ends. At interior nodes
// this is (g[j+1] - g[j-1]) / (2h), the same pairing the transposed step
// system applies.
std::vector<double> slope_at_nodes(const std::vector<double>& g, double h) {
  const int n = static_cast<int>(g.size());
  std::vector<double> out(st(n));
  out[0] = (g[1] - g[0]) / h;
  for (int j = 1; j < n - 1; ++j) out[st(j)] = (g[st(j + 1)] - g[st(j - 1)]) / (2.0 * h);
  out[st(n - 1)] = (g[st(n - 1)] - g[st(n - 2)]) / h;
  return out;
}

}  // namespace

AdjointTrajectory solve_adjoint(const ScalarField& c,
                                const AdjointState& final_data,
                                const ModelParams& params, const TimeGrid& grid) {
  params.validate();
  grid.validate();
  c.require_finite("solve_adjoint.c");
  final_data.require_same_mesh();
  if (!c.mesh().same_geometry(final_data.eta_adj.mesh()))
    throw ConfigError("solve_adjoint: mesh mismatch");

  const SpatialMesh& mesh = c.mesh();
  const MeshPtr mesh_ptr = final_data.eta_adj.mesh_ptr();
  const int n = mesh.n_nodes();
  const TriDiagMatrix h_op = detail::constrained_h_operator(mesh, params.beta);
  const TriDiagMatrix d_op = detail::constrained_d_operator(mesh);
  const double dt = grid.dt();
  const double th = grid.theta;

  // Reversed time tau = T - t turns the final-value problem into a marching
  // one: H eta_tau = -diag(c) D gamma, H gamma_tau = -D eta.
  BandedMatrix step(2 * n, 3, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      const double hh = (j == i) ? h_op.diag[st(i)]
                      : (j == i - 1) ? h_op.sub[st(i)] : h_op.super[st(i)];
      const double dd = (j == i) ? 0.0
                      : (j == i - 1) ? d_op.sub[st(i)] : d_op.super[st(i)];
      step.set(2 * i, 2 * j, hh);
      step.set(2 * i, 2 * j + 1, dt * th * dd * c[i]);
      step.set(2 * i + 1, 2 * j, dt * th * dd);
      step.set(2 * i + 1, 2 * j + 1, hh);
    }
  }
  BandedLU lu(step);

  AdjointTrajectory traj;
  traj.grid = grid;
  traj.states.assign(st(grid.n_steps + 1),
                     AdjointState{ScalarField(), ScalarField()});
  traj.states[st(grid.n_steps)] = final_data;

  std::vector<double> ev(final_data.eta_adj.values());
  std::vector<double> gv(final_data.gamma_adj.values());
  std::vector<double> he(st(n)), hg(st(n)), dg(st(n)), de(st(n)), rhs(st(2 * n));
  for (int k = grid.n_steps; k >= 1; --k) {
    h_op.multiply(ev, he);
    h_op.multiply(gv, hg);
    d_op.multiply(gv, dg);
    d_op.multiply(ev, de);
    const double co = dt * (1.0 - th);
    for (int j = 0; j < n; ++j) {
      rhs[st(2 * j)] = he[st(j)] - co * c[j] * dg[st(j)];
      rhs[st(2 * j + 1)] = hg[st(j)] - co * de[st(j)];
    }
    lu.solve(rhs);
    for (int j = 0; j < n; ++j) {
      ev[st(j)] = rhs[st(2 * j)];
      gv[st(j)] = rhs[st(2 * j + 1)];
    }
    traj.states[st(k - 1)] =
        AdjointState{ScalarField(mesh_ptr, ev), ScalarField(mesh_ptr, gv)};
  }
  return traj;
}

GradientField gradient_continuous(const ScalarField& c, const Trajectory& forward_nv,
                                  const AdjointTrajectory& adjoint, double alpha) {
  if (forward_nv.states.size() != adjoint.states.size())
    throw ConfigError("gradient_continuous: trajectory lengths differ");
  if (forward_nv.grid.n_steps != adjoint.grid.n_steps ||
      forward_nv.grid.t_final != adjoint.grid.t_final)
    throw ConfigError("gradient_continuous: grids differ");
  const SpatialMesh& mesh = c.mesh();
  if (!mesh.same_geometry(forward_nv.initial().eta.mesh()))
    throw ConfigError("gradient_continuous: mesh mismatch");

  const int n = mesh.n_nodes();
  const int k_last = static_cast<int>(forward_nv.states.size()) - 1;
  const double dt = forward_nv.grid.dt();
  const double h = mesh.dx();

  std::vector<double> acc(st(n), 0.0);
  for (int k = 0; k <= k_last; ++k) {
    const std::vector<double>& nvals = forward_nv.states[st(k)].eta.values();
    const std::vector<double> gx =
        slope_at_nodes(adjoint.states[st(k)].gamma_adj.values(), h);
    const double wt = (k == 0 || k == k_last) ? 0.5 * dt : dt;
    for (int j = 0; j < n; ++j) acc[st(j)] += wt * nvals[st(j)] * gx[st(j)];
  }
  for (int j = 0; j < n; ++j) acc[st(j)] += alpha * c[j];
  return GradientField{c.with_values(std::move(acc))};
}

GradientField gradient_discrete(const ObjectiveSpec& spec,
                                const ForwardProblem& problem,
                                const NewtonConfig& newton) {
  return gradient_discrete_from_trajectory(spec, problem,
                                           solve_forward(problem, newton));
}

GradientField gradient_discrete_from_trajectory(const ObjectiveSpec& spec,
                                                const ForwardProblem& problem,
                                                const Trajectory& forward_traj) {
  problem.validate();
  spec.validate();
  const int k_steps = problem.grid.n_steps;
  if (static_cast<int>(forward_traj.states.size()) != k_steps + 1)
    throw ConfigError("gradient_discrete: trajectory does not match the grid");
  if (!forward_traj.initial().eta.mesh().same_geometry(*problem.mesh))
    throw ConfigError("gradient_discrete: trajectory on a different mesh");

  detail::ThetaStepper stepper(problem.params, *problem.mesh, problem.grid,
                               problem.coeff.values());
  const int n = problem.mesh->n_nodes();

  auto interleaved = [&](int k) {
    return detail::ThetaStepper::interleave(
        forward_traj.states[st(k)].eta.values(),
        forward_traj.states[st(k)].vel.values());
  };

  std::vector<double> d_eta, d_vel;
  misfit_gradient(spec, forward_traj.final_state(), problem.params.beta, d_eta,
                  d_vel);
  std::vector<double> lambda(st(2 * n));
  for (int j = 0; j < n; ++j) {
    lambda[st(2 * j)] = -d_eta[st(j)];
    lambda[st(2 * j + 1)] = -d_vel[st(j)];
  }

  std::vector<double> grad_m(st(n), 0.0);
  std::vector<double> x_new = interleaved(k_steps);
  std::vector<double> x_old = interleaved(k_steps - 1);

  BandedMatrix jac;
  BandedLU lu;
  const bool linear = stepper.is_linear();
  BandedMatrix jprev_const;
  if (linear) {
    stepper.newton_jacobian(x_new, jac);
    lu.factor(jac.transpose());
    stepper.prev_jacobian(x_new, jprev_const);
  }

  // lambda^K solves J_next(X^K)^T lambda = -dJmis/dX^K.
  if (!linear) {
    stepper.newton_jacobian(x_new, jac);
    lu.factor(jac.transpose());
  }
  lu.solve(lambda);
  stepper.accumulate_coeff_gradient(lambda, x_old, x_new, grad_m);

  std::vector<double> rhs(st(2 * n));
  for (int k = k_steps - 1; k >= 1; --k) {
    x_new = std::move(x_old);
    x_old = interleaved(k - 1);
    if (linear) {
      jprev_const.multiply_transpose(lambda, rhs);
    } else {
      stepper.prev_jacobian(x_new, jac);
      jac.multiply_transpose(lambda, rhs);
    }
    for (double& v : rhs) v = -v;
    if (!linear) {
      stepper.newton_jacobian(x_new, jac);
      lu.factor(jac.transpose());
    }
    lambda = rhs;
    lu.solve(lambda);
    stepper.accumulate_coeff_gradient(lambda, x_old, x_new, grad_m);
  }

  const std::vector<double> reg = regularizer_gradient(spec, problem.coeff);
  for (int j = 0; j < n; ++j) grad_m[st(j)] += reg[st(j)];
  return GradientField{problem.coeff.with_values(std::move(grad_m))};
}

GradientField gradient_discrete_cform(const ObjectiveSpec& spec,
                                      const ScalarField& c,
                                      const WaveState& init_nv, double beta,
                                      const TimeGrid& grid) {
  spec.validate();
  const Trajectory traj = solve_linear_cform(c, init_nv, beta, grid);
  const SpatialMesh& mesh = c.mesh();
  const int n = mesh.n_nodes();
  const int k_steps = grid.n_steps;
  const double dt = grid.dt();
  const double th = grid.theta;
  const TriDiagMatrix h_op = detail::constrained_h_operator(mesh, beta);
  const TriDiagMatrix d_op = detail::constrained_d_operator(mesh);

  // Transposed step matrix of the (N, V) march, factored once.
  BandedMatrix step_t(2 * n, 3, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      const double hh = (j == i) ? h_op.diag[st(i)]
                      : (j == i - 1) ? h_op.sub[st(i)] : h_op.super[st(i)];
      const double dd = (j == i) ? 0.0
                      : (j == i - 1) ? d_op.sub[st(i)] : d_op.super[st(i)];
      // (i, j) of the transpose is (j, i) of the forward matrix.
      step_t.set(2 * j, 2 * i, hh);
      step_t.set(2 * j + 1, 2 * i, -dt * th * dd);
      step_t.set(2 * j, 2 * i + 1, -dt * th * dd * c[j]);
      step_t.set(2 * j + 1, 2 * i + 1, hh);
    }
  }
  BandedLU lu(step_t);

  std::vector<double> d_eta, d_vel;
  misfit_gradient(spec, traj.final_state(), beta, d_eta, d_vel);
  std::vector<double> lambda(st(2 * n));
  for (int j = 0; j < n; ++j) {
    lambda[st(2 * j)] = -d_eta[st(j)];
    lambda[st(2 * j + 1)] = -d_vel[st(j)];
  }
  lu.solve(lambda);

  std::vector<double> grad(st(n), 0.0);
  std::vector<double> l2(st(n)), dtl2(st(n)), he(st(n)), de(st(n)), rhs(st(2 * n));
  auto accumulate = [&](int k) {
    // dG2/dc_j = -dt D e_j (theta N^{k+1} + (1-theta) N^k)_j.
    const std::vector<double>& n_new = traj.states[st(k + 1)].eta.values();
    const std::vector<double>& n_old = traj.states[st(k)].eta.values();
    for (int j = 0; j < n; ++j) l2[st(j)] = lambda[st(2 * j + 1)];
    d_op.multiply_transpose(l2, dtl2);
    for (int j = 0; j < n; ++j)
      grad[st(j)] -= dt * (th * n_new[st(j)] + (1.0 - th) * n_old[st(j)]) * dtl2[st(j)];
  };

  accumulate(k_steps - 1);
  for (int k = k_steps - 1; k >= 1; --k) {
    // rhs = -S_prev^T lambda with S_prev = [[-H, -dt(1-th)D], [-dt(1-th)D diag(c), -H]].
    const double co = dt * (1.0 - th);
    std::vector<double> l1(st(n));
    for (int j = 0; j < n; ++j) {
      l1[st(j)] = lambda[st(2 * j)];
      l2[st(j)] = lambda[st(2 * j + 1)];
    }
    std::vector<double> hl1(st(n)), hl2(st(n)), dtl1(st(n));
    h_op.multiply(l1, hl1);
    h_op.multiply(l2, hl2);
    d_op.multiply_transpose(l1, dtl1);
    d_op.multiply_transpose(l2, dtl2);
    for (int j = 0; j < n; ++j) {
      rhs[st(2 * j)] = hl1[st(j)] + co * c[j] * dtl2[st(j)];
      rhs[st(2 * j + 1)] = hl2[st(j)] + co * dtl1[st(j)];
    }
    lambda = rhs;
    lu.solve(lambda);
    accumulate(k - 1);
  }

  const std::vector<double> reg = regularizer_gradient(spec, c);
  for (int j = 0; j < n; ++j) grad[st(j)] += reg[st(j)];
  return GradientField{c.with_values(std::move(grad))};
}

double optimality_residual(const ScalarField& c, const GradientField& grad,
                           const AdmissibleSet& set) {
  if (!c.mesh().same_geometry(grad.values.mesh()))
    throw ConfigError("optimality_residual: mesh mismatch");
  std::vector<double> step(c.values());
  for (int j = 0; j < c.size(); ++j) step[st(j)] -= grad.values[j];
  const ScalarField projected = project_admissible(c.with_values(std::move(step)), set);
  double acc = 0.0;
  for (int j = 0; j < c.size(); ++j)
    acc = std::max(acc, std::abs(c[j] - projected[j]));
  return acc;
}

}  // namespace bouss
