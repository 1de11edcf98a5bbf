#include "bouss/objective.hpp"

#include <cmath>
#include <string>

#include "bouss/fem.hpp"

namespace bouss {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

double l2_misfit_sq(const WaveState& final_state, const Measurement& m) {
  const ScalarField d1 = final_state.eta - m.m1;
  const ScalarField d2 = final_state.vel - m.m2;
  return discrete_l2_inner(d1, d1) + discrete_l2_inner(d2, d2);
}

}  // namespace

const char* to_string(ObjectiveVariant v) {
  switch (v) {
    case ObjectiveVariant::H1_TIKHONOV: return "H1_TIKHONOV";
    case ObjectiveVariant::L2_DEV1: return "L2_DEV1";
    case ObjectiveVariant::L1_DEV1: return "L1_DEV1";
    case ObjectiveVariant::L2_PLAIN: return "L2_PLAIN";
  }
  return "?";
}

ObjectiveVariant objective_variant_from_string(const std::string& name) {
  if (name == "H1_TIKHONOV") return ObjectiveVariant::H1_TIKHONOV;
  if (name == "L2_DEV1") return ObjectiveVariant::L2_DEV1;
  if (name == "L1_DEV1") return ObjectiveVariant::L1_DEV1;
  if (name == "L2_PLAIN") return ObjectiveVariant::L2_PLAIN;
  throw ConfigError("unknown objective variant: " + name);
}

double eval_objective(const ObjectiveSpec& spec, const WaveState& final_state,
                      const ScalarField& coeff, double beta) {
  spec.validate();
  final_state.require_same_mesh();
  if (!final_state.eta.mesh().same_geometry(spec.measurement.m1.mesh()) ||
      !final_state.eta.mesh().same_geometry(coeff.mesh()))
    throw ConfigError("eval_objective: fields on different meshes");

  const std::vector<double> w = trapezoid_weights(coeff.mesh());
  double reg = 0.0;
  switch (spec.variant) {
    case ObjectiveVariant::H1_TIKHONOV: {
      const ScalarField d1 = final_state.eta - spec.measurement.m1;
      const ScalarField d2 = final_state.vel - spec.measurement.m2;
      const double mis = weighted_h1_inner(d1, d1, beta) +
                         weighted_h1_inner(d2, d2, beta);
      reg = discrete_l2_inner(coeff, coeff);
      return 0.5 * mis + 0.5 * spec.alpha * reg;
    }
    case ObjectiveVariant::L2_DEV1:
      for (int j = 0; j < coeff.size(); ++j) {
        const double d = coeff[j] - 1.0;
        reg += w[st(j)] * d * d;
      }
      break;
    case ObjectiveVariant::L1_DEV1: {
      const double eps2 = spec.l1_smoothing_eps * spec.l1_smoothing_eps;
      for (int j = 0; j < coeff.size(); ++j) {
        const double d = coeff[j] - 1.0;
        reg += w[st(j)] * std::sqrt(d * d + eps2);
      }
      break;
    }
    case ObjectiveVariant::L2_PLAIN:
      for (int j = 0; j < coeff.size(); ++j)
        reg += w[st(j)] * coeff[j] * coeff[j];
      break;
  }
  return 0.5 * l2_misfit_sq(final_state, spec.measurement) + 0.5 * spec.alpha * reg;
}

double misfit_error(const ScalarField& coeff_computed,
                    const ScalarField& coeff_exact) {
  return discrete_l2_norm(coeff_computed - coeff_exact);
}

void misfit_gradient(const ObjectiveSpec& spec, const WaveState& final_state,
                     double beta, std::vector<double>& d_eta,
                     std::vector<double>& d_vel) {
  const ScalarField r1 = final_state.eta - spec.measurement.m1;
  const ScalarField r2 = final_state.vel - spec.measurement.m2;
  const int n = r1.size();
  d_eta.assign(st(n), 0.0);
  d_vel.assign(st(n), 0.0);

  if (spec.variant == ObjectiveVariant::H1_TIKHONOV) {
    // Gradient rows of the exact-quadrature H1 norm: (mass + (beta/6) stiff) r.
    AssembledOperators ops = assemble(r1.mesh(), beta);
    std::vector<double> tmp(st(n));
    const double b6 = beta / 6.0;
    ops.mass.multiply(r1.values(), d_eta);
    ops.stiff.multiply(r1.values(), tmp);
    for (int j = 0; j < n; ++j) d_eta[st(j)] += b6 * tmp[st(j)];
    ops.mass.multiply(r2.values(), d_vel);
    ops.stiff.multiply(r2.values(), tmp);
    for (int j = 0; j < n; ++j) d_vel[st(j)] += b6 * tmp[st(j)];
    return;
  }

  const std::vector<double> w = trapezoid_weights(r1.mesh());
  for (int j = 0; j < n; ++j) {
    d_eta[st(j)] = w[st(j)] * r1[j];
    d_vel[st(j)] = w[st(j)] * r2[j];
  }
}

std::vector<double> regularizer_gradient(const ObjectiveSpec& spec,
                                         const ScalarField& coeff) {
  const int n = coeff.size();
  std::vector<double> g(st(n), 0.0);
  const std::vector<double> w = trapezoid_weights(coeff.mesh());
  switch (spec.variant) {
    case ObjectiveVariant::H1_TIKHONOV:
    case ObjectiveVariant::L2_PLAIN:
      for (int j = 0; j < n; ++j) g[st(j)] = spec.alpha * w[st(j)] * coeff[j];
      break;
    case ObjectiveVariant::L2_DEV1:
      for (int j = 0; j < n; ++j)
        g[st(j)] = spec.alpha * w[st(j)] * (coeff[j] - 1.0);
      break;
    case ObjectiveVariant::L1_DEV1: {
      const double eps2 = spec.l1_smoothing_eps * spec.l1_smoothing_eps;
      for (int j = 0; j < n; ++j) {
        const double d = coeff[j] - 1.0;
        g[st(j)] = 0.5 * spec.alpha * w[st(j)] * d / std::sqrt(d * d + eps2);
      }
      break;
    }
  }
  return g;
}

}  // namespace bouss
