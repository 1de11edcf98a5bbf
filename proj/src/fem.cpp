#include "bouss/fem.hpp"

#include <cmath>

namespace bouss {

void TriDiagMatrix::multiply(const std::vector<double>& x,
                             std::vector<double>& y) const {
  const int n = size();
  y.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = diag[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (i > 0) acc += sub[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i - 1)];
    if (i < n - 1)
      acc += super[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + 1)];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

void TriDiagMatrix::multiply_transpose(const std::vector<double>& x,
                                       std::vector<double>& y) const {
  const int n = size();
  y.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = diag[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    if (i < n - 1)
      acc += sub[static_cast<std::size_t>(i + 1)] * x[static_cast<std::size_t>(i + 1)];
    if (i > 0)
      acc += super[static_cast<std::size_t>(i - 1)] * x[static_cast<std::size_t>(i - 1)];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

AssembledOperators assemble(const SpatialMesh& mesh, double beta) {
  if (!(beta > 0.0)) throw ParameterError("assemble: beta must be > 0");
  const int n = mesh.n_nodes();
  const double h = mesh.dx();
  AssembledOperators ops{TriDiagMatrix(n), TriDiagMatrix(n), TriDiagMatrix(n)};

  for (int e = 0; e < mesh.n_cells(); ++e) {
    const auto l = static_cast<std::size_t>(e);
    const auto r = l + 1;
    ops.mass.diag[l] += h / 3.0;
    ops.mass.diag[r] += h / 3.0;
    ops.mass.super[l] += h / 6.0;
    ops.mass.sub[r] += h / 6.0;
    ops.stiff.diag[l] += 1.0 / h;
    ops.stiff.diag[r] += 1.0 / h;
    ops.stiff.super[l] += -1.0 / h;
    ops.stiff.sub[r] += -1.0 / h;
  }

  const double b6 = beta / 6.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    ops.h1op.sub[i] = ops.mass.sub[i] + b6 * ops.stiff.sub[i];
    ops.h1op.diag[i] = ops.mass.diag[i] + b6 * ops.stiff.diag[i];
    ops.h1op.super[i] = ops.mass.super[i] + b6 * ops.stiff.super[i];
  }

  // Strong Dirichlet rows and columns so the operator stays symmetric.
  const auto last = static_cast<std::size_t>(n - 1);
  ops.h1op.diag[0] = 1.0;
  ops.h1op.super[0] = 0.0;
  ops.h1op.sub[1] = 0.0;
  ops.h1op.diag[last] = 1.0;
  ops.h1op.sub[last] = 0.0;
  ops.h1op.super[last - 1] = 0.0;
  return ops;
}

std::vector<double> solve_tridiag(const TriDiagMatrix& a,
                                  const std::vector<double>& rhs) {
  const int n = a.size();
  if (static_cast<int>(rhs.size()) != n)
    throw ConfigError("solve_tridiag: rhs length mismatch");
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  std::vector<double> d(rhs);
  double pivot = a.diag[0];
  if (pivot == 0.0) throw SingularMatrixError("solve_tridiag: zero pivot");
  c[0] = a.super[0] / pivot;
  d[0] /= pivot;
  for (int i = 1; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    pivot = a.diag[k] - a.sub[k] * c[k - 1];
    if (pivot == 0.0) throw SingularMatrixError("solve_tridiag: zero pivot");
    if (i < n - 1) c[k] = a.super[k] / pivot;
    d[k] = (d[k] - a.sub[k] * d[k - 1]) / pivot;
  }
  for (int i = n - 2; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    d[k] -= c[k] * d[k + 1];
  }
  return d;
}

ScalarField interpolate(const std::function<double(double)>& f, MeshPtr mesh) {
  std::vector<double> v(static_cast<std::size_t>(mesh->n_nodes()));
  for (int j = 0; j < mesh->n_nodes(); ++j) {
    const double y = f(mesh->node(j));
    if (!std::isfinite(y))
      throw InvalidFieldError("interpolate: f is non-finite at a node");
    v[static_cast<std::size_t>(j)] = y;
  }
  return ScalarField(std::move(mesh), std::move(v));
}

}  // namespace bouss
