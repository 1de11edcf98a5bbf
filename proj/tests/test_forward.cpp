#include <doctest.h>

#include <cmath>
#include <random>

#include "bouss/fem.hpp"
#include "bouss/forward.hpp"

using namespace bouss;

namespace {

ScalarField random_h01_field(MeshPtr mesh, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(mesh->n_nodes()));
  for (double& x : v) x = dist(rng);
  v.front() = 0.0;
  v.back() = 0.0;
  return ScalarField(std::move(mesh), std::move(v));
}

ScalarField bump(MeshPtr mesh, double center, double width = 1.0) {
  ScalarField f = interpolate(
      [center, width](double x) {
        const double z = (x - center) / width;
        return std::exp(-z * z);
      },
      mesh);
  std::vector<double> v(f.values());
  v.front() = 0.0;
  v.back() = 0.0;
  return f.with_values(std::move(v));
}

double state_energy(const WaveState& s, double beta) {
  return weighted_h1_inner(s.eta, s.eta, beta) +
         weighted_h1_inner(s.vel, s.vel, beta);
}

double pair_h1_norm(const WaveState& s, double beta) {
  return std::sqrt(state_energy(s, beta));
}

// log of the right side of the forward energy bound (squared-norm form).
double log_ana_rhs(const WaveState& init, const ScalarField& c, double beta,
                   double t_final) {
  return 0.5 * std::log(t_final) + 2.0 * std::log(pair_h1_norm(init, beta)) +
         energy_kc(c, beta) * t_final;
}

ForwardProblem small_problem(MeshPtr mesh, double alpha_tilde, double t_final,
                             int n_steps, const ScalarField& coeff) {
  ForwardProblem p;
  p.params = ModelParams{0.1, alpha_tilde};
  p.mesh = mesh;
  p.grid = TimeGrid{t_final, n_steps, 0.5};
  p.coeff = coeff;
  p.init = WaveState{bump(mesh, 3.0), bump(mesh, 3.0)};
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("forward");

TEST_CASE("zero data stays zero") {
  auto mesh = make_mesh(0.0, 10.0, 40);
  ForwardProblem p = small_problem(mesh, 0.05, 1.0, 20,
                                   ScalarField::constant(mesh, 1.0));
  p.init = WaveState{ScalarField::zeros(mesh), ScalarField::zeros(mesh)};
  const Trajectory traj = solve_forward(p);
  for (const WaveState& s : traj.states) {
    CHECK(discrete_l2_norm(s.eta) == 0.0);
    CHECK(discrete_l2_norm(s.vel) == 0.0);
  }
}

TEST_CASE("problem validation") {
  auto mesh = make_mesh(0.0, 10.0, 20);
  ForwardProblem p = small_problem(mesh, 0.0, 1.0, 10,
                                   ScalarField::constant(mesh, 1.0));
  p.coeff = ScalarField::constant(mesh, 0.0);
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.coeff = ScalarField::constant(mesh, 1.0);
  p.init = WaveState{ScalarField::constant(mesh, 1.0), ScalarField::zeros(mesh)};
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("newton step on the linear problem matches the prefactored path") {
  auto mesh = make_mesh(0.0, 10.0, 50);
  std::mt19937 rng(5);
  ForwardProblem p = small_problem(mesh, 0.0, 0.02, 1,
                                   ScalarField::constant(mesh, 1.0));
  p.init = WaveState{random_h01_field(mesh, rng), random_h01_field(mesh, rng)};
  const WaveState one = step_theta(p, p.init, NewtonConfig{});
  const Trajectory traj = solve_forward(p);
  const WaveState& other = traj.final_state();
  for (int j = 0; j < mesh->n_nodes(); ++j) {
    CHECK(one.eta[j] == doctest::Approx(other.eta[j]).epsilon(1e-12));
    CHECK(one.vel[j] == doctest::Approx(other.vel[j]).epsilon(1e-12));
  }
}

TEST_CASE("single-step energy conservation for the unit coefficient") {
  auto mesh = make_mesh(0.0, 10.0, 60);
  std::mt19937 rng(17);
  ForwardProblem p = small_problem(mesh, 0.0, 0.01, 1,
                                   ScalarField::constant(mesh, 1.0));
  p.init = WaveState{random_h01_field(mesh, rng), random_h01_field(mesh, rng)};
  const WaveState next = step_theta(p, p.init, NewtonConfig{});
  const double e0 = state_energy(p.init, p.params.beta);
  const double e1 = state_energy(next, p.params.beta);
  CHECK(std::abs(e1 - e0) / e0 < 1e-10);
}

TEST_CASE("full-horizon conservation, theta = 1/2, c == 1") {
  auto mesh = make_mesh(-20.0, 40.0, 200);
  ForwardProblem p = small_problem(mesh, 0.0, 5.0, 250,
                                   ScalarField::constant(mesh, 1.0));
  const Trajectory traj = solve_forward(p);
  const double e0 = state_energy(traj.initial(), p.params.beta);
  for (const WaveState& s : traj.states)
    CHECK(std::abs(state_energy(s, p.params.beta) - e0) / e0 < 1e-9);
}

TEST_CASE("energy estimate holds on linear runs") {
  auto mesh = make_mesh(0.0, 10.0, 80);
  std::mt19937 rng(23);
  const ScalarField c = interpolate(
      [](double x) { return 1.0 + 0.4 * std::sin(0.7 * x); }, mesh);
  WaveState init{random_h01_field(mesh, rng), random_h01_field(mesh, rng)};
  const double beta = 0.1;
  const TimeGrid grid{1.0, 100, 0.5};
  const Trajectory traj = solve_linear_cform(c, init, beta, grid);
  const double lhs = trajectory_l2t_sq(traj, beta);
  CHECK(std::log(lhs) < log_ana_rhs(init, c, beta, grid.t_final));
}

TEST_CASE("difference-system estimate holds") {
  auto mesh = make_mesh(0.0, 10.0, 80);
  const ScalarField c = ScalarField::constant(mesh, 1.0);
  const ScalarField c_tilde = interpolate(
      [](double x) { return 1.0 + 0.3 * std::exp(-(x - 5.0) * (x - 5.0)); }, mesh);
  WaveState init{bump(mesh, 5.0), bump(mesh, 5.0)};
  const double beta = 0.1;
  const TimeGrid grid{1.0, 100, 0.5};
  const Trajectory ta = solve_linear_cform(c, init, beta, grid);
  const Trajectory tb = solve_linear_cform(c_tilde, init, beta, grid);
  Trajectory diff;
  diff.grid = grid;
  for (std::size_t k = 0; k < ta.states.size(); ++k)
    diff.states.push_back(WaveState{tb.states[k].eta - ta.states[k].eta,
                                    tb.states[k].vel - ta.states[k].vel});
  const double lhs_log = 0.5 * std::log(trajectory_l2t_sq(diff, beta));
  const double t_final = grid.t_final;
  const double l = mesh->length();
  const double rhs_log = 0.5 * std::log(l) + 1.5 * std::log(t_final) -
                         std::log(beta / 6.0) +
                         std::log(discrete_l2_norm(c_tilde - c)) +
                         std::log(pair_h1_norm(init, beta)) +
                         (energy_kc(c, beta) + energy_kc(c_tilde, beta)) * t_final;
  CHECK(lhs_log < rhs_log);
}

TEST_CASE("change of variables") {
  auto mesh = make_mesh(0.0, 4.0, 16);
  std::mt19937 rng(3);
  const ScalarField m = interpolate([](double x) { return 1.2 + 0.3 * std::cos(x); }, mesh);
  const ScalarField ones = ScalarField::constant(mesh, 1.0);
  const ScalarField n = random_h01_field(mesh, rng);
  const ScalarField v = random_h01_field(mesh, rng);

  const WaveState ident = change_of_variables(n, v, ones);
  for (int j = 0; j < mesh->n_nodes(); ++j) CHECK(ident.eta[j] == n[j]);

  const WaveState unit_eta = change_of_variables(m, v, m);
  for (int j = 0; j < mesh->n_nodes(); ++j)
    CHECK(unit_eta.eta[j] == doctest::Approx(1.0).epsilon(1e-14));

  const WaveState fwd = change_of_variables(n, v, m);
  const WaveState back = change_of_variables_inverse(fwd, m);
  for (int j = 0; j < mesh->n_nodes(); ++j) {
    CHECK(back.eta[j] == doctest::Approx(n[j]).epsilon(1e-14));
    CHECK(back.vel[j] == doctest::Approx(v[j]).epsilon(1e-14));
  }

  CHECK_THROWS_AS(change_of_variables(n, v, ScalarField::zeros(mesh)),
                  ParameterError);
}

TEST_CASE("c-form solver coincides with the forward solver at M == 1") {
  auto mesh = make_mesh(-5.0, 15.0, 120);
  ForwardProblem p = small_problem(mesh, 0.0, 1.0, 50,
                                   ScalarField::constant(mesh, 1.0));
  const Trajectory a = solve_forward(p);
  const Trajectory b = solve_linear_cform(ScalarField::constant(mesh, 1.0),
                                          p.init, p.params.beta, p.grid);
  for (std::size_t k = 0; k < a.states.size(); ++k)
    for (int j = 0; j < mesh->n_nodes(); ++j) {
      CHECK(a.states[k].eta[j] == doctest::Approx(b.states[k].eta[j]).epsilon(1e-12));
      CHECK(a.states[k].vel[j] == doctest::Approx(b.states[k].vel[j]).epsilon(1e-12));
    }
}

TEST_CASE("forward linear path is the transformed system in (eta, u) variables") {
  // With U1 acting on the interpolated product M*eta, the alpha_tilde = 0
  // march in (eta, u) is algebraically the (N, V) scheme with c = 1/M.
  auto mesh = make_mesh(-5.0, 15.0, 120);
  const ScalarField m = interpolate(
      [](double x) { return 1.0 + 0.4 * std::exp(-(x - 6.0) * (x - 6.0)); }, mesh);
  ForwardProblem p = small_problem(mesh, 0.0, 1.0, 50, m);
  const Trajectory a = solve_forward(p);

  std::vector<double> cv(m.values());
  for (double& v : cv) v = 1.0 / v;
  const ScalarField c = m.with_values(std::move(cv));
  const Trajectory b =
      solve_linear_cform(c, change_of_variables_inverse(p.init, m),
                         p.params.beta, p.grid);
  for (std::size_t k = 0; k < a.states.size(); k += 10) {
    const WaveState nv = change_of_variables_inverse(a.states[k], m);
    for (int j = 0; j < mesh->n_nodes(); ++j) {
      CHECK(nv.eta[j] == doctest::Approx(b.states[k].eta[j]).epsilon(1e-10));
      CHECK(nv.vel[j] == doctest::Approx(b.states[k].vel[j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("grid convergence at order two on a smooth linear problem") {
  // Fixed problem, simultaneous (dx, dt) halving against a fine reference.
  const double t_final = 0.5;
  auto run = [&](int n_cells, int n_steps) {
    auto mesh = make_mesh(0.0, 10.0, n_cells);
    ForwardProblem p;
    p.params = ModelParams{0.1, 0.0};
    p.mesh = mesh;
    p.grid = TimeGrid{t_final, n_steps, 0.5};
    p.coeff = interpolate([](double x) { return 1.0 + 0.3 * std::sin(x); }, mesh);
    p.init = WaveState{bump(mesh, 5.0), bump(mesh, 5.0)};
    return solve_forward(p);
  };
  const Trajectory ref = run(640, 320);
  auto error_vs_ref = [&](const Trajectory& t, int stride) {
    double acc = 0.0;
    const auto& fe = ref.final_state();
    const auto& te = t.final_state();
    const double dx = te.eta.mesh().dx();
    for (int j = 0; j < te.eta.size(); ++j) {
      const double de = te.eta[j] - fe.eta[j * stride];
      const double dv = te.vel[j] - fe.vel[j * stride];
      const double w = (j == 0 || j == te.eta.size() - 1) ? 0.5 : 1.0;
      acc += w * (de * de + dv * dv) * dx;
    }
    return std::sqrt(acc);
  };
  const double e1 = error_vs_ref(run(40, 20), 16);
  const double e2 = error_vs_ref(run(80, 40), 8);
  const double e3 = error_vs_ref(run(160, 80), 4);
  const double order12 = std::log2(e1 / e2);
  const double order23 = std::log2(e2 / e3);
  CHECK(order12 > 1.8);
  CHECK(order23 > 1.8);
}

TEST_CASE("tiny nonlinearity stays close to the linear path") {
  auto mesh = make_mesh(0.0, 10.0, 60);
  const ScalarField m = interpolate([](double x) { return 1.0 + 0.2 * std::sin(x); }, mesh);
  ForwardProblem p0 = small_problem(mesh, 0.0, 0.5, 25, m);
  ForwardProblem p1 = small_problem(mesh, 1e-10, 0.5, 25, m);
  const WaveState a = solve_forward(p0).final_state();
  const WaveState b = solve_forward(p1).final_state();
  CHECK(discrete_l2_norm(a.eta - b.eta) < 1e-8);
  CHECK(discrete_l2_norm(a.vel - b.vel) < 1e-8);
}

TEST_CASE("newton failure carries the step index and residual") {
  auto mesh = make_mesh(0.0, 10.0, 30);
  ForwardProblem p = small_problem(mesh, 0.5, 1.0, 2,
                                   ScalarField::constant(mesh, 1.0));
  NewtonConfig strict{1e-15, 1};
  try {
    solve_forward(p, strict);
    FAIL("expected StepFailureError");
  } catch (const StepFailureError& e) {
    CHECK(e.step() >= 0);
    CHECK(e.residual() > 1e-15);
  }
}

TEST_SUITE_END();
