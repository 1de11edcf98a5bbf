#ifndef BOUSS_OBJECTIVE_HPP
#define BOUSS_OBJECTIVE_HPP

#include <vector>

#include "bouss/core.hpp"

namespace bouss {

/// Final-time target profiles the inverse problem fits against.
struct Measurement {
  ScalarField m1;
  ScalarField m2;

  void require_same_mesh() const {
    if (!m1.mesh().same_geometry(m2.mesh()))
      throw ConfigError("Measurement: components on different meshes");
  }
};

/// Which Tikhonov functional is minimized.
///   H1_TIKHONOV : weighted-H1 misfit + (alpha/2) ||c||_L2^2
///   L2_DEV1     : L2 misfit + (alpha/2) ||M - 1||_L2^2
///   L1_DEV1     : L2 misfit + (alpha/2) int sqrt((M-1)^2 + eps^2)
///   L2_PLAIN    : L2 misfit + (alpha/2) ||M||_L2^2
enum class ObjectiveVariant { H1_TIKHONOV, L2_DEV1, L1_DEV1, L2_PLAIN };

const char* to_string(ObjectiveVariant v);
ObjectiveVariant objective_variant_from_string(const std::string& name);

struct ObjectiveSpec {
  ObjectiveVariant variant = ObjectiveVariant::L2_DEV1;
  double alpha = 0.0;
  Measurement measurement;
  double l1_smoothing_eps = 1e-8;

  void validate() const {
    if (!(alpha >= 0.0)) throw ParameterError("ObjectiveSpec: alpha must be >= 0");
    if (!(l1_smoothing_eps > 0.0))
      throw ParameterError("ObjectiveSpec: l1_smoothing_eps must be > 0");
    measurement.require_same_mesh();
  }
};

/// Evaluate the selected functional at a final-time state and coefficient.
/// beta enters only through the weighted-H1 misfit; callers pass the model's
/// dispersion coefficient so norms match the forward problem.
double eval_objective(const ObjectiveSpec& spec, const WaveState& final_state,
                      const ScalarField& coeff, double beta);

/// Discrete L2 distance between a computed and exact coefficient.
double misfit_error(const ScalarField& coeff_computed,
                    const ScalarField& coeff_exact);

/// Partial derivatives of the misfit part with respect to the nodal values of
/// the final state. Feeds the backward sweep of the discrete adjoint.
void misfit_gradient(const ObjectiveSpec& spec, const WaveState& final_state,
                     double beta, std::vector<double>& d_eta,
                     std::vector<double>& d_vel);

/// Partial derivatives of the regularization term with respect to nodal
/// coefficient values.
std::vector<double> regularizer_gradient(const ObjectiveSpec& spec,
                                         const ScalarField& coeff);

}  // namespace bouss

#endif  // BOUSS_OBJECTIVE_HPP
