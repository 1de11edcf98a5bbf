#ifndef BOUSS_CORE_HPP
#define BOUSS_CORE_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "bouss/errors.hpp"

namespace bouss {

/// Physical parameters of the dispersive system: beta weights the mixed
/// third-derivative term (beta/6) d2/dxi2 d/dt, alpha_tilde the nonlinearity.
/// alpha_tilde = 0 is the linear regime.
struct ModelParams {
  double beta = 0.1;
  double alpha_tilde = 0.0;

  void validate() const {
    if (!(beta > 0.0)) throw ParameterError("ModelParams: beta must be > 0");
    if (!(alpha_tilde >= 0.0))
      throw ParameterError("ModelParams: alpha_tilde must be >= 0");
  }
};

/// Uniform partition of [x_left, x_right] into n_cells cells.
class SpatialMesh {
public:
  SpatialMesh(double x_left, double x_right, int n_cells);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  int n_cells() const { return n_cells_; }
  int n_nodes() const { return n_cells_ + 1; }
  double dx() const { return dx_; }
  double length() const { return x_right_ - x_left_; }
  double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& nodes() const { return nodes_; }

  bool same_geometry(const SpatialMesh& other) const {
    return x_left_ == other.x_left_ && x_right_ == other.x_right_ &&
           n_cells_ == other.n_cells_;
  }

private:
  double x_left_;
  double x_right_;
  int n_cells_;
  double dx_;
  std::vector<double> nodes_;
};

using MeshPtr = std::shared_ptr<const SpatialMesh>;

inline MeshPtr make_mesh(double x_left, double x_right, int n_cells) {
  return std::make_shared<const SpatialMesh>(x_left, x_right, n_cells);
}

/// Uniform time grid on [0, t_final] with theta the implicitness weight of the
/// two-level scheme (theta = 1/2 is the second-order midpoint rule).
struct TimeGrid {
  double t_final = 1.0;
  int n_steps = 1;
  double theta = 0.5;

  double dt() const { return t_final / n_steps; }

  void validate() const {
    if (!(t_final > 0.0)) throw ParameterError("TimeGrid: t_final must be > 0");
    if (n_steps < 1) throw ParameterError("TimeGrid: n_steps must be >= 1");
    if (!(theta >= 0.0 && theta <= 1.0))
      throw ParameterError("TimeGrid: theta must lie in [0,1]");
  }
};

/// One real value per mesh node. Fields are immutable snapshots; all mutation
/// happens through construction.
class ScalarField {
public:
  ScalarField() = default;
  ScalarField(MeshPtr mesh, std::vector<double> values);

  static ScalarField zeros(MeshPtr mesh);
  static ScalarField constant(MeshPtr mesh, double value);

  const SpatialMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
  int size() const { return static_cast<int>(values_.size()); }

  ScalarField with_values(std::vector<double> values) const {
    return ScalarField(mesh_, std::move(values));
  }

  /// Throws InvalidFieldError if any entry is NaN/inf.
  void require_finite(const char* context) const;

private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& f);

/// Wave state at a single time: surface displacement (eta or N) paired with
/// velocity (u or V), both on one mesh. Dirichlet runs keep boundary nodes 0.
struct WaveState {
  ScalarField eta;
  ScalarField vel;

  void require_same_mesh() const {
    if (!eta.mesh().same_geometry(vel.mesh()))
      throw ConfigError("WaveState: eta and vel live on different meshes");
  }

  bool boundary_zero() const {
    const int n = eta.size() - 1;
    return eta[0] == 0.0 && eta[n] == 0.0 && vel[0] == 0.0 && vel[n] == 0.0;
  }
};

/// Full time history: states[k] is the state at t = k*dt. Every step is kept
/// so backward sweeps can revisit the whole forward history.
struct Trajectory {
  TimeGrid grid;
  std::vector<WaveState> states;

  const WaveState& initial() const { return states.front(); }
  const WaveState& final_state() const { return states.back(); }
};

/// Admissible coefficients: an L2 ball of radius gamma, optionally intersected
/// with nodewise box bounds. gamma = infinity disables the ball.
struct AdmissibleSet {
  double gamma = std::numeric_limits<double>::infinity();
  std::optional<std::vector<double>> box_lo;
  std::optional<std::vector<double>> box_hi;

  static AdmissibleSet unconstrained() { return AdmissibleSet{}; }
  static AdmissibleSet box(int n_nodes, double lo, double hi);

  void validate() const;
};

/// Constants of the a-priori energy estimates. k_c multiplies T in the
/// exponential of the forward bound, k1 and k2 are the difference-system and
/// adjoint-system factors. Only meaningful at scales where exp(k_c T) stays
/// finite; the inequality checks themselves work in log space.
struct EnergyConstants {
  double k_c = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;

  void validate() const {
    if (!(std::isfinite(k_c) && std::isfinite(k1) && std::isfinite(k2)) ||
        k_c < 0.0 || k1 < 0.0 || k2 < 0.0)
      throw ParameterError("EnergyConstants: entries must be finite and >= 0");
  }
};

/// K_c = sqrt(L)/(beta/6) * ||c||_{L2} + 1/sqrt(beta/6).
double energy_kc(const ScalarField& c, double beta);

EnergyConstants make_energy_constants(const ScalarField& c,
                                      const ScalarField& c_tilde, double beta,
                                      double t_final);

/// Trapezoid weights including the dx factor: w_j = dx (interior), dx/2 (ends).
std::vector<double> trapezoid_weights(const SpatialMesh& mesh);

/// sqrt( sum_j w_j f_j^2 dx ) with trapezoid weights.
double discrete_l2_norm(const ScalarField& f);

/// Trapezoid L2 inner product of two fields on one mesh.
double discrete_l2_inner(const ScalarField& f, const ScalarField& g);

/// ( int f^2 + (beta/6) int (f')^2 )^(1/2) with exact piecewise-linear
/// quadrature for both terms.
double weighted_h1_norm(const ScalarField& f, double beta);

/// Weighted H1 inner product matching weighted_h1_norm.
double weighted_h1_inner(const ScalarField& f, const ScalarField& g,
                         double beta);

/// Squared trajectory norm in L2(0,T; H1) x L2(0,T; H1): trapezoid in time of
/// ||eta||_{H1}^2 + ||vel||_{H1}^2.
double trajectory_l2t_sq(const Trajectory& traj, double beta);

}  // namespace bouss

#endif  // BOUSS_CORE_HPP
