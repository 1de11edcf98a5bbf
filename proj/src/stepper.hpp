#ifndef BOUSS_SRC_STEPPER_HPP
#define BOUSS_SRC_STEPPER_HPP

#include <vector>

#include "bouss/banded.hpp"
#include "bouss/fem.hpp"
#include "bouss/forward.hpp"

namespace bouss::detail {

// Internals of the theta scheme for the (eta, u) system, shared by the forward
// march and the discrete-adjoint sweep. States are interleaved nodal vectors
// x[2j] = eta_j, x[2j+1] = u_j so that the step systems are banded with
// bandwidth 3.
//
// Per step the implicit relation is
//   G(x_new, x_old) = B x_new - dt*theta*flux(x_new)
//                   - B x_old - dt*(1-theta)*flux(x_old) = 0,
// where B = blockdiag(A_M, H), A_M = H diag(M) realizes the weighted term
// <M eta, phi> + (beta/6) <d(M eta), d phi> on the P1 interpolant of the
// nodal product M*eta, and flux stacks D w, D z with the nodewise products
// w = (1 + at*eta/M) u and z = eta + (at/2)(u/M)^2. At alpha_tilde = 0 this
// is, node for node, the transformed (N, V) scheme under N = M*eta.
//
// Dirichlet conditions are built into the operators: H carries identity
// rows/columns at the boundary, D zero rows/columns, so boundary values ride
// along unchanged and the algebra stays exactly the transpose-consistent
// Galerkin system on the interior.
class ThetaStepper {
public:
  ThetaStepper(const ModelParams& params, const SpatialMesh& mesh,
               const TimeGrid& grid, const std::vector<double>& coeff);

  int n_nodes() const { return n_; }
  int n_dofs() const { return 2 * n_; }
  double dt() const { return dt_; }
  double theta() const { return theta_; }

  static std::vector<double> interleave(const std::vector<double>& eta,
                                        const std::vector<double>& u);
  static void split(const std::vector<double>& x, std::vector<double>& eta,
                    std::vector<double>& u);

  // rhs = B x_old + dt*(1-theta)*flux(x_old)
  void step_rhs(const std::vector<double>& x_old, std::vector<double>& rhs) const;

  // r = B x - dt*theta*flux(x) - rhs
  void residual(const std::vector<double>& x, const std::vector<double>& rhs,
                std::vector<double>& r) const;

  // jac = a*B + b*dflux(x); the Newton matrix is assemble(x, 1, -dt*theta),
  // the old-state block of dG is assemble(x, -1, -dt*(1-theta)).
  void assemble_jacobian(const std::vector<double>& x, double a, double b,
                         BandedMatrix& jac) const;

  void newton_jacobian(const std::vector<double>& x, BandedMatrix& jac) const {
    assemble_jacobian(x, 1.0, -dt_ * theta_, jac);
  }
  void prev_jacobian(const std::vector<double>& x, BandedMatrix& jac) const {
    assemble_jacobian(x, -1.0, -dt_ * (1.0 - theta_), jac);
  }

  // Solve G(x_new, x_old) = 0 for x_new by Newton iteration starting from
  // x_old. step_index only labels the error on failure.
  std::vector<double> newton_step(const std::vector<double>& x_old,
                                  const NewtonConfig& newton,
                                  int step_index) const;

  // grad_m[j] += lambda^T dG/dM_j evaluated at (x_old -> x_new); lambda is the
  // interleaved multiplier of this step's relation.
  void accumulate_coeff_gradient(const std::vector<double>& lambda,
                                 const std::vector<double>& x_old,
                                 const std::vector<double>& x_new,
                                 std::vector<double>& grad_m) const;

  bool is_linear() const { return alpha_tilde_ == 0.0; }

private:
  void flux(const std::vector<double>& x, std::vector<double>& f) const;
  void apply_block(const std::vector<double>& x, std::vector<double>& y) const;

  int n_;
  double dt_;
  double theta_;
  double alpha_tilde_;
  std::vector<double> m_;
  TriDiagMatrix a_m_;   // constrained weighted operator for the eta equation
  TriDiagMatrix h_op_;  // constrained mass + (beta/6) stiffness
  TriDiagMatrix d_op_;  // constrained <phi_j, phi_i'>
  mutable std::vector<double> scratch_w_;
  mutable std::vector<double> scratch_f1_;
  mutable std::vector<double> scratch_f2_;
};

// Constrained operators for the linear (N, V) and adjoint systems.
TriDiagMatrix constrained_h_operator(const SpatialMesh& mesh, double beta);
TriDiagMatrix constrained_d_operator(const SpatialMesh& mesh);

}  // namespace bouss::detail

#endif  // BOUSS_SRC_STEPPER_HPP
