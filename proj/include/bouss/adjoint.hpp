#ifndef BOUSS_ADJOINT_HPP
#define BOUSS_ADJOINT_HPP

#include "bouss/core.hpp"
#include "bouss/forward.hpp"
#include "bouss/objective.hpp"

namespace bouss {

/// Adjoint pair (eta, gamma) at one time level; boundary nodes stay zero.
struct AdjointState {
  ScalarField eta_adj;
  ScalarField gamma_adj;

  void require_same_mesh() const {
    if (!eta_adj.mesh().same_geometry(gamma_adj.mesh()))
      throw ConfigError("AdjointState: components on different meshes");
  }
};

/// Backward trajectory indexed by forward time: states[k] lives at t = k*dt,
/// states[n_steps] is the supplied final data.
struct AdjointTrajectory {
  TimeGrid grid;
  std::vector<AdjointState> states;

  const AdjointState& at_initial_time() const { return states.front(); }
  const AdjointState& at_final_time() const { return states.back(); }
};

/// Gradient of an objective with respect to nodal coefficient values.
struct GradientField {
  ScalarField values;
};

/// March the adjoint system
///   eta_t + c gamma_x - (beta/6) eta_xxt = 0,
///   gamma_t + eta_x - (beta/6) gamma_xxt = 0
/// backward from the final data with the same theta scheme as the forward
/// solver (written in reversed time tau = T - t). The c gamma_x pairing is
/// collocated at the test node, which makes the march the exact transpose of
/// the linear forward step.
AdjointTrajectory solve_adjoint(const ScalarField& c,
                                const AdjointState& final_data,
                                const ModelParams& params, const TimeGrid& grid);

/// Continuous-theory gradient of the weighted-H1 Tikhonov functional:
/// nodal values of int_0^T N gamma_x dt + alpha c, with gamma_x the
/// element slope averaged to nodes and a trapezoid rule in time. forward_nv
/// is the (N, V) trajectory, adjoint the matching backward solve.
GradientField gradient_continuous(const ScalarField& c, const Trajectory& forward_nv,
                                  const AdjointTrajectory& adjoint, double alpha);

/// Exact gradient of the discrete objective with respect to nodal coefficient
/// values: one backward sweep of the transposed linearized step systems
/// through the stored forward trajectory, valid for any alpha_tilde.
GradientField gradient_discrete(const ObjectiveSpec& spec,
                                const ForwardProblem& problem,
                                const NewtonConfig& newton = {});

/// Same backward sweep reusing an already-computed forward trajectory (it
/// must come from this problem's solve).
GradientField gradient_discrete_from_trajectory(const ObjectiveSpec& spec,
                                                const ForwardProblem& problem,
                                                const Trajectory& forward_traj);

/// Discrete gradient with respect to the wave-speed coefficient c of the
/// transformed linear system (the parameterization the continuous theory
/// lives in). Used to cross-check the continuous-adjoint gradient.
GradientField gradient_discrete_cform(const ObjectiveSpec& spec,
                                      const ScalarField& c,
                                      const WaveState& init_nv, double beta,
                                      const TimeGrid& grid);

/// Projected-gradient residual ||c - P(c - grad)||_inf; zero exactly when the
/// first-order optimality condition holds on the discrete admissible set.
double optimality_residual(const ScalarField& c, const GradientField& grad,
                           const AdmissibleSet& set);

}  // namespace bouss

#endif  // BOUSS_ADJOINT_HPP
