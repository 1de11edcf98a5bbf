#ifndef BOUSS_GREEN_HPP
#define BOUSS_GREEN_HPP

#include "bouss/core.hpp"

namespace bouss {

/// Closed-form Green's function of I - (beta/6) d2/dxi2 on [0, L] with
/// homogeneous Dirichlet conditions:
///   G(xi, s) = sinh(min/w) sinh((L - max)/w) / (w sinh(L/w)),  w = sqrt(beta/6),
/// which equals the cosh-difference form and is evaluated through scaled
/// exponentials so large L/w does not overflow. K = dG/ds jumps by 6/beta
/// across the diagonal.
class GreenKernel {
public:
  GreenKernel(double beta, double length);

  double beta() const { return beta_; }
  double length() const { return length_; }

  double g(double xi, double s) const;

  /// dG/ds away from the diagonal; throws DomainError at xi == s.
  double k(double xi, double s) const;

  /// One-sided limits of K at the diagonal (s -> xi from below / above).
  double k_left(double xi) const;
  double k_right(double xi) const;

private:
  void check_domain(double xi, double s) const;

  double beta_;
  double length_;
  double w_;          // sqrt(beta/6)
  double inv_denom_;  // 1 / (1 - exp(-2 L / w))
};

enum class PhiOperator { phi1, phi2 };

/// Integral operators of the fixed-point formulation:
///   Phi1(phi)(xi) = int G(xi, s) phi(s) ds,
///   Phi2(phi)(xi) = int K(xi, s) phi(s) ds,
/// computed by composite trapezoid on the field's mesh; Phi2 splits the
/// diagonal cell and uses one-sided kernel limits there. Fields live on
/// [L0, L1]; coordinates are shifted internally so the kernel sees [0, L].
ScalarField apply_phi(const GreenKernel& kernel, PhiOperator which,
                      const ScalarField& phi);

/// Method-of-lines oracle for the linear transformed system:
///   N_t = int K(xi, s) V(s, t) ds,  V_t = int K(xi, s) c(s) N(s, t) ds,
/// integrated by classical RK4 with boundary nodes pinned to zero. Throws
/// InstabilityError if the solution exceeds 1e12 in the max norm.
Trajectory solve_linear_integral(const ModelParams& params, const ScalarField& c,
                                 const WaveState& init, const TimeGrid& grid);

}  // namespace bouss

#endif  // BOUSS_GREEN_HPP
