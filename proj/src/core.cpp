#include "bouss/core.hpp"

#include <algorithm>
#include <cmath>

namespace bouss {

SpatialMesh::SpatialMesh(double x_left, double x_right, int n_cells)
    : x_left_(x_left), x_right_(x_right), n_cells_(n_cells) {
  if (!(x_left < x_right))
    throw ParameterError("SpatialMesh: x_left must be < x_right");
  if (n_cells < 2) throw ParameterError("SpatialMesh: n_cells must be >= 2");
  dx_ = (x_right - x_left) / n_cells;
  nodes_.resize(static_cast<std::size_t>(n_cells) + 1);
  for (int j = 0; j <= n_cells; ++j)
    nodes_[static_cast<std::size_t>(j)] = x_left + j * dx_;
  nodes_.back() = x_right;
}

ScalarField::ScalarField(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw ConfigError("ScalarField: null mesh");
  if (static_cast<int>(values_.size()) != mesh_->n_nodes())
    throw InvalidFieldError("ScalarField: values length != n_cells + 1");
}

ScalarField ScalarField::zeros(MeshPtr mesh) {
  std::vector<double> v(static_cast<std::size_t>(mesh->n_nodes()), 0.0);
  return ScalarField(std::move(mesh), std::move(v));
}

ScalarField ScalarField::constant(MeshPtr mesh, double value) {
  std::vector<double> v(static_cast<std::size_t>(mesh->n_nodes()), value);
  return ScalarField(std::move(mesh), std::move(v));
}

void ScalarField::require_finite(const char* context) const {
  for (double v : values_)
    if (!std::isfinite(v))
      throw InvalidFieldError(std::string(context) +
                              ": field has non-finite entries");
}

namespace {

void require_compatible(const ScalarField& a, const ScalarField& b) {
  if (!a.mesh().same_geometry(b.mesh()))
    throw ConfigError("ScalarField: operands live on different meshes");
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_compatible(a, b);
  std::vector<double> v(a.values());
  for (int j = 0; j < a.size(); ++j) v[static_cast<std::size_t>(j)] += b[j];
  return a.with_values(std::move(v));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_compatible(a, b);
  std::vector<double> v(a.values());
  for (int j = 0; j < a.size(); ++j) v[static_cast<std::size_t>(j)] -= b[j];
  return a.with_values(std::move(v));
}

ScalarField operator*(double s, const ScalarField& f) {
  std::vector<double> v(f.values());
  for (double& x : v) x *= s;
  return f.with_values(std::move(v));
}

AdmissibleSet AdmissibleSet::box(int n_nodes, double lo, double hi) {
  AdmissibleSet set;
  set.box_lo = std::vector<double>(static_cast<std::size_t>(n_nodes), lo);
  set.box_hi = std::vector<double>(static_cast<std::size_t>(n_nodes), hi);
  set.validate();
  return set;
}

void AdmissibleSet::validate() const {
  if (!(gamma > 0.0)) throw ParameterError("AdmissibleSet: gamma must be > 0");
  if (box_lo.has_value() != box_hi.has_value())
    throw ParameterError("AdmissibleSet: box bounds must come in pairs");
  if (box_lo) {
    if (box_lo->size() != box_hi->size())
      throw ParameterError("AdmissibleSet: box bound lengths differ");
    for (std::size_t j = 0; j < box_lo->size(); ++j)
      if (!((*box_lo)[j] <= (*box_hi)[j]))
        throw ParameterError("AdmissibleSet: box_lo > box_hi at a node");
  }
}

double energy_kc(const ScalarField& c, double beta) {
  if (!(beta > 0.0)) throw ParameterError("energy_kc: beta must be > 0");
  const double b6 = beta / 6.0;
  const double l = c.mesh().length();
  return std::sqrt(l) / b6 * discrete_l2_norm(c) + 1.0 / std::sqrt(b6);
}

EnergyConstants make_energy_constants(const ScalarField& c,
                                      const ScalarField& c_tilde, double beta,
                                      double t_final) {
  EnergyConstants k;
  k.k_c = energy_kc(c, beta);
  k.k1 = std::exp((k.k_c + energy_kc(c_tilde, beta)) * t_final);
  k.k2 = std::exp(k.k_c * t_final);
  k.validate();
  return k;
}

std::vector<double> trapezoid_weights(const SpatialMesh& mesh) {
  std::vector<double> w(static_cast<std::size_t>(mesh.n_nodes()), mesh.dx());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double discrete_l2_norm(const ScalarField& f) {
  return std::sqrt(discrete_l2_inner(f, f));
}

double discrete_l2_inner(const ScalarField& f, const ScalarField& g) {
  if (!f.mesh().same_geometry(g.mesh()))
    throw ConfigError("discrete_l2_inner: mesh mismatch");
  f.require_finite("discrete_l2_inner");
  g.require_finite("discrete_l2_inner");
  const double dx = f.mesh().dx();
  const int n = f.size() - 1;
  double acc = 0.5 * (f[0] * g[0] + f[n] * g[n]);
  for (int j = 1; j < n; ++j) acc += f[j] * g[j];
  return acc * dx;
}

double weighted_h1_norm(const ScalarField& f, double beta) {
  return std::sqrt(weighted_h1_inner(f, f, beta));
}

double weighted_h1_inner(const ScalarField& f, const ScalarField& g,
                         double beta) {
  if (!(beta > 0.0)) throw ParameterError("weighted_h1_inner: beta must be > 0");
  if (!f.mesh().same_geometry(g.mesh()))
    throw ConfigError("weighted_h1_inner: mesh mismatch");
  f.require_finite("weighted_h1_inner");
  g.require_finite("weighted_h1_inner");
  const double h = f.mesh().dx();
  const int n = f.size() - 1;
  // Exact P1 quadrature: element mass (h/6)[[2,1],[1,2]], element stiffness
  // (1/h)[[1,-1],[-1,1]].
  double mass = 0.0;
  double stiff = 0.0;
  for (int e = 0; e < n; ++e) {
    const double f0 = f[e], f1 = f[e + 1];
    const double g0 = g[e], g1 = g[e + 1];
    mass += (h / 6.0) * (2.0 * f0 * g0 + f0 * g1 + f1 * g0 + 2.0 * f1 * g1);
    stiff += (f1 - f0) * (g1 - g0) / h;
  }
  return mass + beta / 6.0 * stiff;
}

double trajectory_l2t_sq(const Trajectory& traj, double beta) {
  const double dt = traj.grid.dt();
  const int k = static_cast<int>(traj.states.size()) - 1;
  double acc = 0.0;
  for (int m = 0; m <= k; ++m) {
    const WaveState& s = traj.states[static_cast<std::size_t>(m)];
    const double e = weighted_h1_inner(s.eta, s.eta, beta) +
                     weighted_h1_inner(s.vel, s.vel, beta);
    acc += (m == 0 || m == k) ? 0.5 * e : e;
  }
  return acc * dt;
}

}  // namespace bouss
