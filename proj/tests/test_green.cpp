#include <doctest.h>

#include <cmath>
#include <random>

#include "bouss/fem.hpp"
#include "bouss/forward.hpp"
#include "bouss/green.hpp"
#include "bouss/harness.hpp"

using namespace bouss;

namespace {

// Literal cosh-difference form, usable while L / sqrt(beta/6) stays small.
double g_reference(double beta, double l, double xi, double s) {
  const double w = std::sqrt(beta / 6.0);
  return 0.5 / w *
         (std::cosh((l - std::abs(s - xi)) / w) - std::cosh((l - (xi + s)) / w)) /
         std::sinh(l / w);
}

ScalarField smooth_phi(MeshPtr mesh, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  const double l = mesh->length();
  std::vector<double> a(5);
  for (double& v : a) v = amp(rng);
  return interpolate(
      [a, l, left = mesh->x_left()](double x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
          acc += a[k] * std::sin((k + 1) * M_PI * (x - left) / l);
        return acc;
      },
      mesh);
}

ScalarField gauss_bump(MeshPtr mesh, double center, double width) {
  ScalarField f = interpolate(
      [center, width](double x) {
        const double z = (x - center) / width;
        return std::exp(-z * z);
      },
      mesh);
  std::vector<double> v(f.values());
  v.front() = v.back() = 0.0;
  return f.with_values(std::move(v));
}

}  // namespace

TEST_SUITE_BEGIN("green");

TEST_CASE("kernel matches the literal formula where it is evaluable") {
  std::mt19937 rng(31);
  for (double beta : {0.6, 0.3}) {
    const double l = 1.5;
    GreenKernel kernel(beta, l);
    std::uniform_real_distribution<double> dist(0.0, l);
    for (int trial = 0; trial < 200; ++trial) {
      const double xi = dist(rng);
      const double s = dist(rng);
      CHECK(kernel.g(xi, s) ==
            doctest::Approx(g_reference(beta, l, xi, s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel boundary values and symmetry") {
  GreenKernel kernel(0.1, 10.0);
  std::mt19937 rng(33);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double s = dist(rng);
    CHECK(std::abs(kernel.g(0.0, s)) < 1e-15);
    CHECK(std::abs(kernel.g(10.0, s)) < 1e-15);
    const double xi = dist(rng);
    CHECK(std::abs(kernel.g(xi, s) - kernel.g(s, xi)) < 1e-13);
  }
  CHECK_THROWS_AS(kernel.g(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(kernel.k(1.0, 1.0), DomainError);
}

TEST_CASE("kernel stays finite at experiment scale") {
  // L / sqrt(beta/6) ~ 1470 here: the literal cosh/sinh quotient overflows,
  // the scaled-exponential form must not.
  GreenKernel kernel(0.01, 60.0);
  CHECK(std::isfinite(kernel.g(30.0, 29.0)));
  CHECK(kernel.g(30.0, 29.0) > 0.0);
  CHECK(std::isfinite(kernel.k(30.0, 29.0)));
  const double jump = kernel.k_left(30.0) - kernel.k_right(30.0);
  CHECK(jump == doctest::Approx(600.0).epsilon(1e-10));
}

TEST_CASE("K equals dG/ds away from the diagonal") {
  GreenKernel kernel(0.1, 10.0);
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> dist(0.5, 9.5);
  const double delta = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double xi = dist(rng);
    const double s = dist(rng);
    if (std::abs(xi - s) < 10.0 * delta) continue;
    const double fd = (kernel.g(xi, s + delta) - kernel.g(xi, s - delta)) / (2.0 * delta);
    CHECK(kernel.k(xi, s) == doctest::Approx(fd).epsilon(1e-6));
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("diagonal jump equals 6/beta") {
  for (double beta : {0.05, 0.1, 0.6}) {
    for (double l : {10.0, 60.0}) {
      GreenKernel kernel(beta, l);
      for (double frac : {0.21, 0.5, 0.83}) {
        const double xi = frac * l;
        const double one_sided =
            kernel.k(xi, xi - 1e-8) - kernel.k(xi, xi + 1e-8);
        CHECK(one_sided == doctest::Approx(6.0 / beta).epsilon(1e-4));
        const double exact_limits = kernel.k_left(xi) - kernel.k_right(xi);
        CHECK(exact_limits == doctest::Approx(6.0 / beta).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("K sign follows the side of the diagonal") {
  GreenKernel kernel(0.1, 10.0);
  for (double xi : {2.0, 5.0, 8.0}) {
    CHECK(kernel.k(xi, xi - 0.5) > 0.0);
    CHECK(kernel.k(xi, xi + 0.5) < 0.0);
  }
}

TEST_CASE("phi operators: zero input, boundedness under refinement") {
  const double beta = 0.1;
  for (PhiOperator which : {PhiOperator::phi1, PhiOperator::phi2}) {
    auto mesh = make_mesh(0.0, 5.0, 100);
    GreenKernel kernel(beta, 5.0);
    const ScalarField out = apply_phi(kernel, which, ScalarField::zeros(mesh));
    CHECK(discrete_l2_norm(out) == 0.0);
  }
  // ||Phi phi||_H1 / ||phi||_L2 settles to a finite limit as the mesh refines.
  for (PhiOperator which : {PhiOperator::phi1, PhiOperator::phi2}) {
    double prev_ratio = -1.0;
    double last_delta = 1e9;
    for (int n : {100, 200, 400}) {
      auto mesh = make_mesh(0.0, 5.0, n);
      GreenKernel kernel(beta, 5.0);
      const ScalarField phi = smooth_phi(mesh, 101);
      const ScalarField out = apply_phi(kernel, which, phi);
      const double ratio = weighted_h1_norm(out, beta) / discrete_l2_norm(phi);
      CHECK(std::isfinite(ratio));
      CHECK(ratio > 0.0);
      if (prev_ratio > 0.0) last_delta = std::abs(ratio - prev_ratio) / ratio;
      prev_ratio = ratio;
    }
    CHECK(last_delta < 0.02);
  }
}

TEST_CASE("Phi1 inverts the dispersive operator at second order") {
  const double beta = 0.1;
  double prev = 0.0;
  for (int n : {100, 200, 400}) {
    auto mesh = make_mesh(0.0, 5.0, n);
    GreenKernel kernel(beta, 5.0);
    const ScalarField phi = smooth_phi(mesh, 7);
    const ScalarField u = apply_phi(kernel, PhiOperator::phi1, phi);
    const double h = mesh->dx();
    const double w2 = beta / 6.0;
    double acc = 0.0;
    for (int j = 1; j < mesh->n_nodes() - 1; ++j) {
      const double lap = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
      const double r = u[j] - w2 * lap - phi[j];
      acc += r * r * h;
    }
    const double err = std::sqrt(acc);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
    prev = err;
  }
}

TEST_CASE("integral solver: zero data, conservation, stability guard") {
  auto mesh = make_mesh(0.0, 5.0, 400);
  const ScalarField c = ScalarField::constant(mesh, 1.0);
  const ModelParams params{0.1, 0.0};

  {
    WaveState zero{ScalarField::zeros(mesh), ScalarField::zeros(mesh)};
    const Trajectory traj = solve_linear_integral(params, c, zero, TimeGrid{0.5, 50, 0.5});
    for (const WaveState& s : traj.states) CHECK(discrete_l2_norm(s.eta) == 0.0);
  }

  {
    const ScalarField b = gauss_bump(mesh, 2.5, 0.6);
    WaveState init{b, b};
    const Trajectory traj =
        solve_linear_integral(params, c, init, TimeGrid{1.0, 500, 0.5});
    const double e0 = weighted_h1_inner(init.eta, init.eta, params.beta) +
                      weighted_h1_inner(init.vel, init.vel, params.beta);
    for (const WaveState& s : traj.states) {
      const double e = weighted_h1_inner(s.eta, s.eta, params.beta) +
                       weighted_h1_inner(s.vel, s.vel, params.beta);
      CHECK(std::abs(e - e0) / e0 < 1e-6);
    }
  }

  {
    auto coarse = make_mesh(0.0, 5.0, 50);
    const ScalarField b = gauss_bump(coarse, 2.5, 0.6);
    WaveState init{b, b};
    CHECK_THROWS_AS(solve_linear_integral(params, ScalarField::constant(coarse, 1.0),
                                          init, TimeGrid{1000.0, 200, 0.5}),
                    InstabilityError);
  }
}

TEST_CASE("integral solver cross-validates the FEM forward solver") {
  // Same linear problem through two unrelated discretizations; the distance
  // between them shrinks at second order under simultaneous refinement.
  const double beta = 0.1;
  const double t_final = 1.0;
  auto error_at = [&](int n_cells, int n_steps) {
    auto mesh = make_mesh(-20.0, 40.0, n_cells);
    const ScalarField m = coefficient_preset("gauss", mesh);
    ForwardProblem p;
    p.params = ModelParams{beta, 0.0};
    p.mesh = mesh;
    p.grid = TimeGrid{t_final, n_steps, 0.5};
    p.coeff = m;
    p.init = WaveState{gauss_bump(mesh, 3.0, 1.5), gauss_bump(mesh, 3.0, 1.5)};
    const Trajectory fem = solve_forward(p);
    const WaveState fem_nv = change_of_variables_inverse(fem.final_state(), m);

    std::vector<double> cv(m.values());
    for (double& v : cv) v = 1.0 / v;
    const ScalarField c = m.with_values(std::move(cv));
    const WaveState init_nv = change_of_variables_inverse(p.init, m);
    const Trajectory green = solve_linear_integral(p.params, c, init_nv, p.grid);
    const WaveState& gr = green.final_state();
    const ScalarField de = fem_nv.eta - gr.eta;
    const ScalarField dv = fem_nv.vel - gr.vel;
    return std::sqrt(discrete_l2_inner(de, de) + discrete_l2_inner(dv, dv));
  };
  // Coarse end of the refinement path; the acceptance suite pushes the same
  // study to the >= 1.8 asymptotic levels.
  const double e1 = error_at(200, 100);
  const double e2 = error_at(400, 200);
  CHECK(e2 < e1);
  CHECK(std::log2(e1 / e2) > 1.5);
}

TEST_SUITE_END();
