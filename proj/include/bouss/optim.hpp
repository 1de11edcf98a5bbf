#ifndef BOUSS_OPTIM_HPP
#define BOUSS_OPTIM_HPP

#include <functional>
#include <string>
#include <vector>

#include "bouss/core.hpp"

namespace bouss {

struct OptimConfig {
  int memory = 10;
  double ftol = 1e-8;
  double gtol = 1e-10;
  int max_iters = 500;
  int ls_max = 30;
  double c1 = 1e-4;
  double c2 = 0.9;

  void validate() const {
    if (memory < 1) throw ParameterError("OptimConfig: memory must be >= 1");
    if (!(ftol > 0.0 && gtol > 0.0))
      throw ParameterError("OptimConfig: tolerances must be > 0");
    if (max_iters < 0) throw ParameterError("OptimConfig: max_iters must be >= 0");
    if (ls_max < 1) throw ParameterError("OptimConfig: ls_max must be >= 1");
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0))
      throw ParameterError("OptimConfig: need 0 < c1 < c2 < 1");
  }
};

struct IterateRecord {
  int iter = 0;
  double objective = 0.0;
  double pg_norm = 0.0;
  double step_len = 0.0;
};

enum class Termination { ftol, gtol, max_iters, line_search_failure };

const char* to_string(Termination t);

struct MinimizeResult {
  ScalarField x;
  std::vector<IterateRecord> history;
  Termination reason = Termination::max_iters;
};

/// Relative-decrease stopping rule on consecutive objective values:
///   |J_next - J_prev| / max{1, |J_next|, |J_prev|} <= ftol.
bool stop_check(double j_prev, double j_next, double ftol);

/// Clip nodewise to the box, then scale radially onto the L2 ball when the
/// trapezoid norm exceeds gamma. Exact Euclidean projection when only one of
/// the two constraints is active.
ScalarField project_admissible(const ScalarField& c, const AdmissibleSet& set);

/// Objective callable: returns the value at x and, when grad_out is non-null,
/// fills the gradient with respect to nodal values. Line-search probes pass
/// null to skip gradient work.
using ObjectiveCallable =
    std::function<double(const ScalarField& x, ScalarField* grad_out)>;

/// Called once per accepted iterate (including the starting point).
using IterationObserver =
    std::function<void(const IterateRecord& record, const ScalarField& x)>;

/// Projected limited-memory BFGS: gradient projection identifies the active
/// bounds, the two-loop recursion runs on the free variables, and a projected
/// backtracking line search enforces Armijo decrease with a Wolfe-curvature
/// expansion attempted when the unit step looks short. Deterministic given
/// identical inputs; the accepted objective sequence never increases.
MinimizeResult minimize(const ObjectiveCallable& fg, const ScalarField& x0,
                        const AdmissibleSet& set, const OptimConfig& cfg = {},
                        const IterationObserver& observer = {});

}  // namespace bouss

#endif  // BOUSS_OPTIM_HPP
