#include "bouss/forward.hpp"

#include <algorithm>
#include <cmath>

#include "stepper.hpp"

namespace bouss {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

WaveState state_from_interleaved(const MeshPtr& mesh, const std::vector<double>& x) {
  std::vector<double> eta, u;
  detail::ThetaStepper::split(x, eta, u);
  return WaveState{ScalarField(mesh, std::move(eta)), ScalarField(mesh, std::move(u))};
}

}  // namespace

void ForwardProblem::validate() const {
  params.validate();
  grid.validate();
  if (!mesh) throw ConfigError("ForwardProblem: null mesh");
  if (!coeff.mesh().same_geometry(*mesh) || !init.eta.mesh().same_geometry(*mesh))
    throw ConfigError("ForwardProblem: fields live on a different mesh");
  init.require_same_mesh();
  coeff.require_finite("ForwardProblem.coeff");
  init.eta.require_finite("ForwardProblem.init.eta");
  init.vel.require_finite("ForwardProblem.init.vel");
  for (double m : coeff.values())
    if (m < kCoeffFloor)
      throw ParameterError("ForwardProblem: coefficient below positivity floor");
  if (!init.boundary_zero())
    throw ConfigError("ForwardProblem: initial data violates Dirichlet conditions");
}

WaveState step_theta(const ForwardProblem& problem, const WaveState& state_n,
                     const NewtonConfig& newton) {
  problem.validate();
  newton.validate();
  state_n.eta.require_finite("step_theta.state_n.eta");
  state_n.vel.require_finite("step_theta.state_n.vel");
  if (!state_n.eta.mesh().same_geometry(*problem.mesh))
    throw ConfigError("step_theta: state on a different mesh");
  detail::ThetaStepper stepper(problem.params, *problem.mesh, problem.grid,
                               problem.coeff.values());
  const std::vector<double> x_old =
      detail::ThetaStepper::interleave(state_n.eta.values(), state_n.vel.values());
  return state_from_interleaved(problem.mesh, stepper.newton_step(x_old, newton, 0));
}

Trajectory solve_forward(const ForwardProblem& problem, const NewtonConfig& newton) {
  problem.validate();
  newton.validate();
  detail::ThetaStepper stepper(problem.params, *problem.mesh, problem.grid,
                               problem.coeff.values());

  Trajectory traj;
  traj.grid = problem.grid;
  traj.states.reserve(st(problem.grid.n_steps + 1));
  traj.states.push_back(problem.init);

  std::vector<double> x = detail::ThetaStepper::interleave(
      problem.init.eta.values(), problem.init.vel.values());

  if (stepper.is_linear()) {
    // The step matrix does not depend on the state: factor once.
    BandedMatrix jac;
    stepper.newton_jacobian(x, jac);
    BandedLU lu(jac);
    std::vector<double> rhs;
    for (int k = 0; k < problem.grid.n_steps; ++k) {
      stepper.step_rhs(x, rhs);
      lu.solve(rhs);
      x = rhs;
      traj.states.push_back(state_from_interleaved(problem.mesh, x));
    }
  } else {
    for (int k = 0; k < problem.grid.n_steps; ++k) {
      x = stepper.newton_step(x, newton, k);
      traj.states.push_back(state_from_interleaved(problem.mesh, x));
    }
  }
  return traj;
}

WaveState change_of_variables(const ScalarField& n, const ScalarField& v,
                              const ScalarField& m) {
  if (!n.mesh().same_geometry(v.mesh()) || !n.mesh().same_geometry(m.mesh()))
    throw ConfigError("change_of_variables: mesh mismatch");
  for (double mj : m.values())
    if (mj < kCoeffFloor)
      throw ParameterError("change_of_variables: coefficient below positivity floor");
  std::vector<double> eta(n.values());
  for (int j = 0; j < n.size(); ++j) eta[st(j)] /= m[j];
  return WaveState{n.with_values(std::move(eta)), v};
}

WaveState change_of_variables_inverse(const WaveState& eta_u, const ScalarField& m) {
  eta_u.require_same_mesh();
  if (!eta_u.eta.mesh().same_geometry(m.mesh()))
    throw ConfigError("change_of_variables_inverse: mesh mismatch");
  for (double mj : m.values())
    if (mj < kCoeffFloor)
      throw ParameterError("change_of_variables_inverse: coefficient below positivity floor");
  std::vector<double> nn(eta_u.eta.values());
  for (int j = 0; j < m.size(); ++j) nn[st(j)] *= m[j];
  return WaveState{eta_u.eta.with_values(std::move(nn)), eta_u.vel};
}

Trajectory solve_linear_cform(const ScalarField& c, const WaveState& init_nv,
                              double beta, const TimeGrid& grid) {
  grid.validate();
  c.require_finite("solve_linear_cform.c");
  init_nv.require_same_mesh();
  if (!c.mesh().same_geometry(init_nv.eta.mesh()))
    throw ConfigError("solve_linear_cform: mesh mismatch");
  const SpatialMesh& mesh = c.mesh();
  const MeshPtr mesh_ptr = init_nv.eta.mesh_ptr();
  const int n = mesh.n_nodes();
  const TriDiagMatrix h_op = detail::constrained_h_operator(mesh, beta);
  const TriDiagMatrix d_op = detail::constrained_d_operator(mesh);
  const double dt = grid.dt();
  const double th = grid.theta;

  // Step matrix rows: [H, -dt*theta*D; -dt*theta*D*diag(c), H].
  BandedMatrix step(2 * n, 3, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      const double hh = (j == i) ? h_op.diag[st(i)]
                      : (j == i - 1) ? h_op.sub[st(i)] : h_op.super[st(i)];
      const double dd = (j == i) ? 0.0
                      : (j == i - 1) ? d_op.sub[st(i)] : d_op.super[st(i)];
      step.set(2 * i, 2 * j, hh);
      step.set(2 * i, 2 * j + 1, -dt * th * dd);
      step.set(2 * i + 1, 2 * j, -dt * th * dd * c[j]);
      step.set(2 * i + 1, 2 * j + 1, hh);
    }
  }
  BandedLU lu(step);

  std::vector<double> nvec(init_nv.eta.values());
  std::vector<double> vvec(init_nv.vel.values());
  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(st(grid.n_steps + 1));
  traj.states.push_back(init_nv);

  std::vector<double> hn(st(n)), hv(st(n)), dv(st(n)), dcn(st(n)), cn(st(n));
  std::vector<double> rhs(st(2 * n));
  for (int k = 0; k < grid.n_steps; ++k) {
    h_op.multiply(nvec, hn);
    h_op.multiply(vvec, hv);
    d_op.multiply(vvec, dv);
    for (int j = 0; j < n; ++j) cn[st(j)] = c[j] * nvec[st(j)];
    d_op.multiply(cn, dcn);
    const double co = dt * (1.0 - th);
    for (int j = 0; j < n; ++j) {
      rhs[st(2 * j)] = hn[st(j)] + co * dv[st(j)];
      rhs[st(2 * j + 1)] = hv[st(j)] + co * dcn[st(j)];
    }
    lu.solve(rhs);
    for (int j = 0; j < n; ++j) {
      nvec[st(j)] = rhs[st(2 * j)];
      vvec[st(j)] = rhs[st(2 * j + 1)];
    }
    traj.states.push_back(WaveState{ScalarField(mesh_ptr, nvec), ScalarField(mesh_ptr, vvec)});
  }
  return traj;
}

}  // namespace bouss
