#include "bouss/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace bouss {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double inf_norm(const std::vector<double>& a) {
  double acc = 0.0;
  for (double v : a) acc = std::max(acc, std::abs(v));
  return acc;
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// Two-loop recursion with H0 = gamma I scaled by the newest pair.
std::vector<double> two_loop(const std::deque<Pair>& pairs,
                             const std::vector<double>& g) {
  std::vector<double> q = g;
  std::vector<double> alpha(pairs.size());
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    const Pair& p = pairs[st(i)];
    alpha[st(i)] = p.rho * dot(p.s, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[st(i)] * p.y[k];
  }
  if (!pairs.empty()) {
    const Pair& last = pairs.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Pair& p = pairs[i];
    const double beta = p.rho * dot(p.y, q);
    for (std::size_t k = 0; k < q.size(); ++k)
      q[k] += (alpha[i] - beta) * p.s[k];
  }
  return q;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ftol: return "ftol";
    case Termination::gtol: return "gtol";
    case Termination::max_iters: return "max_iters";
    case Termination::line_search_failure: return "line_search_failure";
  }
  return "?";
}

bool stop_check(double j_prev, double j_next, double ftol) {
  if (!std::isfinite(j_prev) || !std::isfinite(j_next))
    throw ParameterError("stop_check: values must be finite");
  const double denom = std::max({1.0, std::abs(j_prev), std::abs(j_next)});
  return std::abs(j_next - j_prev) / denom <= ftol;
}

ScalarField project_admissible(const ScalarField& c, const AdmissibleSet& set) {
  set.validate();
  std::vector<double> v(c.values());
  if (set.box_lo) {
    if (static_cast<int>(set.box_lo->size()) != c.size())
      throw ConfigError("project_admissible: box bound length mismatch");
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] = std::min(std::max(v[j], (*set.box_lo)[j]), (*set.box_hi)[j]);
  }
  if (std::isfinite(set.gamma)) {
    const ScalarField clipped = c.with_values(v);
    const double norm = discrete_l2_norm(clipped);
    if (norm > set.gamma)
      for (double& x : v) x *= set.gamma / norm;
  }
  return c.with_values(std::move(v));
}

namespace {

std::vector<double> projected_values(const std::vector<double>& x,
                                     const ScalarField& like,
                                     const AdmissibleSet& set) {
  return project_admissible(like.with_values(x), set).values();
}

double projected_gradient_norm(const std::vector<double>& x,
                               const std::vector<double>& g,
                               const ScalarField& like,
                               const AdmissibleSet& set) {
  std::vector<double> step(x);
  for (std::size_t i = 0; i < x.size(); ++i) step[i] -= g[i];
  step = projected_values(step, like, set);
  for (std::size_t i = 0; i < x.size(); ++i) step[i] = x[i] - step[i];
  return inf_norm(step);
}

}  // namespace

MinimizeResult minimize(const ObjectiveCallable& fg, const ScalarField& x0,
                        const AdmissibleSet& set, const OptimConfig& cfg,
                        const IterationObserver& observer) {
  cfg.validate();
  const int n = x0.size();

  auto evaluate = [&](const std::vector<double>& xv, std::vector<double>* gout,
                      int iter) -> double {
    ScalarField grad;
    const ScalarField x = x0.with_values(xv);
    const double f = fg(x, gout ? &grad : nullptr);
    if (!std::isfinite(f))
      throw EvaluationError("minimize: non-finite objective at iteration " +
                            std::to_string(iter));
    if (gout) {
      grad.require_finite("minimize gradient");
      *gout = grad.values();
    }
    return f;
  };

  std::vector<double> x = projected_values(x0.values(), x0, set);
  std::vector<double> g;
  double f = evaluate(x, &g, 0);

  MinimizeResult result;
  result.reason = Termination::max_iters;
  IterateRecord rec{0, f, projected_gradient_norm(x, g, x0, set), 0.0};
  result.history.push_back(rec);
  if (observer) observer(rec, x0.with_values(x));

  std::deque<Pair> pairs;
  std::vector<double> d(st(n)), x_new, g_new;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const double pg = projected_gradient_norm(x, g, x0, set);
    if (pg <= cfg.gtol) {
      result.reason = Termination::gtol;
      break;
    }

    // Bounds at work: freeze coordinates pressed against an active bound.
    std::vector<char> active(st(n), 0);
    if (set.box_lo) {
      for (int j = 0; j < n; ++j) {
        const double eps = 1e-10 * (1.0 + std::abs(x[st(j)]));
        if ((x[st(j)] <= (*set.box_lo)[st(j)] + eps && g[st(j)] > 0.0) ||
            (x[st(j)] >= (*set.box_hi)[st(j)] - eps && g[st(j)] < 0.0))
          active[st(j)] = 1;
      }
    }
    std::vector<double> g_free(g);
    for (int j = 0; j < n; ++j)
      if (active[st(j)]) g_free[st(j)] = 0.0;

    d = two_loop(pairs, g_free);
    for (double& v : d) v = -v;
    for (int j = 0; j < n; ++j)
      if (active[st(j)]) d[st(j)] = 0.0;

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      pairs.clear();
      d = g_free;
      for (double& v : d) v = -v;
      slope = dot(g, d);
      if (!(slope < 0.0)) {
        result.reason = Termination::gtol;
        break;
      }
    }

    double t = 1.0;
    if (pairs.empty()) {
      const double gn = std::sqrt(dot(g_free, g_free));
      t = std::min(1.0, 1.0 / std::max(gn, 1e-12));
    }

    // Projected backtracking with an Armijo test on the realized move; a
    // Wolfe-curvature expansion doubles the step while it keeps paying off.
    bool accepted = false;
    double f_new = f;
    double realized_decrease_bound = 0.0;
    for (int trial = 0; trial < cfg.ls_max; ++trial) {
      std::vector<double> xt(x);
      for (int j = 0; j < n; ++j) xt[st(j)] += t * d[st(j)];
      xt = projected_values(xt, x0, set);
      std::vector<double> dx(xt);
      for (int j = 0; j < n; ++j) dx[st(j)] -= x[st(j)];
      const double gdx = dot(g, dx);
      const double ft = evaluate(xt, nullptr, iter);
      if (ft <= f + cfg.c1 * gdx && gdx < 0.0) {
        x_new = std::move(xt);
        f_new = ft;
        realized_decrease_bound = gdx;
        accepted = true;
        break;
      }
      // Quadratic backtrack clamped to [0.1 t, 0.5 t].
      const double denom = ft - f - slope * t;
      double t_quad = denom > 0.0 ? -0.5 * slope * t * t / denom : 0.5 * t;
      t = std::min(0.5 * t, std::max(0.1 * t, t_quad));
    }
    if (!accepted) {
      result.reason = Termination::line_search_failure;
      break;
    }

    evaluate(x_new, &g_new, iter);

    // Expand while the curvature condition fails and longer steps keep the
    // Armijo bound; each doubling re-evaluates value and gradient.
    int expansions = 0;
    while (expansions < 8 && dot(g_new, d) < cfg.c2 * slope) {
      const double t_big = 2.0 * t;
      std::vector<double> xt(x);
      for (int j = 0; j < n; ++j) xt[st(j)] += t_big * d[st(j)];
      xt = projected_values(xt, x0, set);
      std::vector<double> dx(xt);
      for (int j = 0; j < n; ++j) dx[st(j)] -= x[st(j)];
      const double gdx = dot(g, dx);
      const double ft = evaluate(xt, nullptr, iter);
      if (!(ft <= f + cfg.c1 * gdx && ft < f_new)) break;
      std::vector<double> gt;
      evaluate(xt, &gt, iter);
      x_new = std::move(xt);
      f_new = ft;
      g_new = std::move(gt);
      t = t_big;
      realized_decrease_bound = gdx;
      ++expansions;
    }
    (void)realized_decrease_bound;

    // Curvature pair with a Powell skip on nearly orthogonal updates.
    Pair p;
    p.s.resize(st(n));
    p.y.resize(st(n));
    for (int j = 0; j < n; ++j) {
      p.s[st(j)] = x_new[st(j)] - x[st(j)];
      p.y[st(j)] = g_new[st(j)] - g[st(j)];
    }
    const double sy = dot(p.s, p.y);
    const double ss = std::sqrt(dot(p.s, p.s));
    const double yy = std::sqrt(dot(p.y, p.y));
    if (sy > 1e-12 * ss * yy) {
      p.rho = 1.0 / sy;
      pairs.push_back(std::move(p));
      if (static_cast<int>(pairs.size()) > cfg.memory) pairs.pop_front();
    }

    const double f_prev = f;
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;

    rec = IterateRecord{iter, f, projected_gradient_norm(x, g, x0, set), t};
    result.history.push_back(rec);
    if (observer) observer(rec, x0.with_values(x));

    if (stop_check(f_prev, f, cfg.ftol)) {
      result.reason = Termination::ftol;
      break;
    }
  }

  result.x = x0.with_values(std::move(x));
  return result;
}

}  // namespace bouss
