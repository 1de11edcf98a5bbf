#include <doctest.h>

#include <cmath>
#include <random>

#include "bouss/fem.hpp"

using namespace bouss;

TEST_SUITE_BEGIN("fem");

TEST_CASE("assembled interior rows match analytic element integrals") {
  {
    SpatialMesh mesh(0.0, 4.0, 4);  // h = 1
    AssembledOperators ops = assemble(mesh, 0.3);
    const int i = 2;
    CHECK(ops.mass.sub[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(ops.mass.diag[i] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ops.mass.super[i] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  }
  {
    SpatialMesh mesh(0.0, 2.0, 4);  // h = 0.5
    AssembledOperators ops = assemble(mesh, 0.3);
    const int i = 2;
    CHECK(ops.stiff.sub[i] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(ops.stiff.diag[i] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(ops.stiff.super[i] == doctest::Approx(-2.0).epsilon(1e-15));
  }
}

TEST_CASE("stiffness is beta-independent and h1op = mass + (beta/6) stiff") {
  SpatialMesh mesh(-1.0, 2.0, 12);
  const double beta = 0.42;
  AssembledOperators a = assemble(mesh, beta);
  AssembledOperators b = assemble(mesh, 7.0 * beta);
  for (int i = 0; i < a.stiff.size(); ++i) {
    CHECK(a.stiff.diag[i] == b.stiff.diag[i]);
    CHECK(a.stiff.sub[i] == b.stiff.sub[i]);
  }
  // Away from the constrained rows the identity holds entrywise.
  for (int i = 1; i < a.h1op.size() - 1; ++i) {
    CHECK(a.h1op.diag[i] ==
          doctest::Approx(a.mass.diag[i] + beta / 6.0 * a.stiff.diag[i]).epsilon(1e-15));
    if (i > 1)
      CHECK(a.h1op.sub[i] ==
            doctest::Approx(a.mass.sub[i] + beta / 6.0 * a.stiff.sub[i]).epsilon(1e-15));
  }
  CHECK(a.h1op.diag[0] == 1.0);
  CHECK(a.h1op.super[0] == 0.0);
  CHECK(a.h1op.diag[a.h1op.size() - 1] == 1.0);
}

TEST_CASE("mass row sums integrate one, stiffness kills constants") {
  SpatialMesh mesh(-3.0, 7.0, 25);
  AssembledOperators ops = assemble(mesh, 0.1);
  std::vector<double> ones(static_cast<std::size_t>(mesh.n_nodes()), 1.0);
  std::vector<double> y;
  ops.mass.multiply(ones, y);
  double total = 0.0;
  for (double v : y) total += v;
  CHECK(total == doctest::Approx(10.0).epsilon(1e-12));
  ops.stiff.multiply(ones, y);
  for (int i = 1; i < mesh.n_nodes() - 1; ++i)
    CHECK(std::abs(y[static_cast<std::size_t>(i)]) < 1e-13);
}

TEST_CASE("h1op quadratic form reproduces the weighted H1 norm") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto mesh = make_mesh(0.0, 1.0, 50);
  const double beta = 0.2;
  AssembledOperators ops = assemble(*mesh, beta);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(mesh->n_nodes()));
    for (double& x : v) x = dist(rng);
    v.front() = 0.0;
    v.back() = 0.0;
    ScalarField f(mesh, v);
    std::vector<double> y;
    ops.h1op.multiply(v, y);
    double quad = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) quad += v[i] * y[i];
    const double norm2 = weighted_h1_inner(f, f, beta);
    CHECK(quad == doctest::Approx(norm2).epsilon(1e-12));
  }
}

TEST_CASE("solve_tridiag: identity, FEM Poisson, construct-and-solve") {
  {
    TriDiagMatrix eye(6);
    for (int i = 0; i < 6; ++i) eye.diag[i] = 1.0;
    std::vector<double> rhs{1, 2, 3, 4, 5, 6};
    CHECK(solve_tridiag(eye, rhs) == rhs);
  }
  {
    // Interior stiffness for -x'' = 1 on [0,1]: P1 nodal values are exact.
    const int n_cells = 16;
    SpatialMesh mesh(0.0, 1.0, n_cells);
    const double h = mesh.dx();
    const int m = n_cells - 1;
    TriDiagMatrix a(m);
    std::vector<double> rhs(static_cast<std::size_t>(m), h);
    for (int i = 0; i < m; ++i) {
      a.diag[i] = 2.0 / h;
      if (i > 0) a.sub[i] = -1.0 / h;
      if (i < m - 1) a.super[i] = -1.0 / h;
    }
    const std::vector<double> x = solve_tridiag(a, rhs);
    for (int i = 0; i < m; ++i) {
      const double xi = mesh.node(i + 1);
      CHECK(x[static_cast<std::size_t>(i)] ==
            doctest::Approx(0.5 * xi * (1.0 - xi)).epsilon(1e-11));
    }
  }
  {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    const int n = 40;
    TriDiagMatrix a(n);
    for (int i = 0; i < n; ++i) {
      if (i > 0) a.sub[i] = -dist(rng);
      if (i < n - 1) a.super[i] = -dist(rng);
    }
    for (int i = 0; i < n; ++i)
      a.diag[i] = 2.5 + std::abs(a.sub[i]) + std::abs(a.super[i]);
    std::vector<double> x_star(static_cast<std::size_t>(n));
    for (double& v : x_star) v = dist(rng);
    std::vector<double> rhs;
    a.multiply(x_star, rhs);
    const std::vector<double> x = solve_tridiag(a, rhs);
    for (int i = 0; i < n; ++i)
      CHECK(x[static_cast<std::size_t>(i)] ==
            doctest::Approx(x_star[static_cast<std::size_t>(i)]).epsilon(1e-10));
  }
  {
    TriDiagMatrix zero(3);
    std::vector<double> rhs{1, 1, 1};
    CHECK_THROWS_AS(solve_tridiag(zero, rhs), SingularMatrixError);
  }
}

TEST_CASE("interpolate") {
  auto mesh = make_mesh(-20.0, 40.0, 600);
  CHECK(discrete_l2_norm(interpolate([](double) { return 0.0; }, mesh)) == 0.0);

  const ScalarField g = interpolate(
      [](double x) { return std::exp(-(x - 3.0) * (x - 3.0)); }, mesh);
  // xi = 3 falls on a node of this mesh (dx = 0.1); the peak value is exact.
  bool found = false;
  for (int j = 0; j < mesh->n_nodes(); ++j)
    if (mesh->node(j) == doctest::Approx(3.0).epsilon(1e-14)) {
      CHECK(g[j] == doctest::Approx(1.0).epsilon(1e-12));
      found = true;
    }
  CHECK(found);

  CHECK_THROWS_AS(interpolate([](double x) { return 1.0 / (x + 20.0); }, mesh),
                  InvalidFieldError);
}

TEST_SUITE_END();
