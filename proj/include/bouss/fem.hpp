#ifndef BOUSS_FEM_HPP
#define BOUSS_FEM_HPP

#include <functional>
#include <vector>

#include "bouss/core.hpp"

namespace bouss {

/// Symmetric-structure tridiagonal matrix stored as three bands.
/// sub[i] = A(i, i-1) for i >= 1, diag[i] = A(i, i), super[i] = A(i, i+1)
/// for i <= n-2, with sub[0] and super[n-1] unused (kept at 0).
struct TriDiagMatrix {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  explicit TriDiagMatrix(int n = 0)
      : sub(static_cast<std::size_t>(n), 0.0),
        diag(static_cast<std::size_t>(n), 0.0),
        super(static_cast<std::size_t>(n), 0.0) {}

  int size() const { return static_cast<int>(diag.size()); }

  /// y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;

  /// y = A^T x
  void multiply_transpose(const std::vector<double>& x,
                          std::vector<double>& y) const;
};

/// P1 operators on a uniform mesh. mass and stiff are the plain (.i.e.
/// unconstrained) Galerkin matrices; h1op = mass + (beta/6) stiff with the
/// first/last row and column replaced by the identity so that it stays SPD
/// and solves with homogeneous Dirichlet data.
struct AssembledOperators {
  TriDiagMatrix mass;
  TriDiagMatrix stiff;
  TriDiagMatrix h1op;
};

/// Assemble mass, stiffness and the constrained weighted-H1 operator.
/// Interior rows on spacing h: mass = (h/6)[1, 4, 1], stiff = (1/h)[-1, 2, -1].
AssembledOperators assemble(const SpatialMesh& mesh, double beta);

/// Thomas elimination. Throws SingularMatrixError on a zero pivot.
std::vector<double> solve_tridiag(const TriDiagMatrix& a,
                                  const std::vector<double>& rhs);

/// Nodal interpolation of a closed-form function.
ScalarField interpolate(const std::function<double(double)>& f, MeshPtr mesh);

}  // namespace bouss

#endif  // BOUSS_FEM_HPP
