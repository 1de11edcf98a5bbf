#ifndef BOUSS_FORWARD_HPP
#define BOUSS_FORWARD_HPP

#include "bouss/core.hpp"

namespace bouss {

/// Coefficients below this floor are rejected: M divides the nonlinear terms.
inline constexpr double kCoeffFloor = 1e-6;

struct NewtonConfig {
  double abs_tol = 1e-10;
  int max_iters = 25;

  void validate() const {
    if (!(abs_tol > 0.0)) throw ParameterError("NewtonConfig: abs_tol must be > 0");
    if (max_iters < 1) throw ParameterError("NewtonConfig: max_iters must be >= 1");
  }
};

/// Everything needed to march the wave system: model parameters, space/time
/// discretization, the topography coefficient M(xi) and initial data (eta0, u0).
struct ForwardProblem {
  ModelParams params;
  MeshPtr mesh;
  TimeGrid grid;
  ScalarField coeff;
  WaveState init;

  void validate() const;
};

/// One theta step of the weak-form system: the new state satisfies
///   (U^{n+1} - U^n)/dt = theta F(U^{n+1}) + (1-theta) F(U^n)
/// with U1 = <M eta, phi> + (beta/6) <d(M eta), d phi> and
///      U2 = <u, phi>    + (beta/6) <d u, d phi>,
/// solved by Newton iteration on the nodal unknowns.
WaveState step_theta(const ForwardProblem& problem, const WaveState& state_n,
                     const NewtonConfig& newton);

/// March the full horizon. The linear regime (alpha_tilde = 0) factors the
/// step matrix once and reuses it; otherwise each step runs Newton.
Trajectory solve_forward(const ForwardProblem& problem,
                         const NewtonConfig& newton = {});

/// (N, V) -> (eta, u) with eta = N / M nodewise, u = V.
WaveState change_of_variables(const ScalarField& n, const ScalarField& v,
                              const ScalarField& m);

/// (eta, u) -> (N, V) with N = M * eta nodewise, V = u.
WaveState change_of_variables_inverse(const WaveState& eta_u,
                                      const ScalarField& m);

/// Theta-scheme for the transformed linear system in (N, V) variables:
///   N_t + V_x - (beta/6) N_xxt = 0,  V_t + (c N)_x - (beta/6) V_xxt = 0,
/// homogeneous Dirichlet data. This is the discretization the adjoint and the
/// energy-estimate checks pair with.
Trajectory solve_linear_cform(const ScalarField& c, const WaveState& init_nv,
                              double beta, const TimeGrid& grid);

}  // namespace bouss

#endif  // BOUSS_FORWARD_HPP
