#pragma once

#include <optional>
#include <vector>

#include "qpdual/linalg.hpp"

namespace qpdual {

// Symmetric eigendecomposition. Eigenvalues sorted ascending, eigenvectors are
// the columns of `vectors` in matching order, each of unit norm.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  Vector eigenvector(std::size_t k) const;
};

// Cyclic Jacobi rotations; fine for the n <= ~50 sizes this project handles.
EigenDecomposition sym_eig(const Matrix& A);

// LU with partial pivoting. Returns nullopt when a pivot falls below
// 1e-12 relative to the largest pivot seen (treated as singular).
std::optional<Vector> solve_linear(const Matrix& M, const Vector& rhs);

// Least-squares solve of M x = rhs via the eigendecomposition of M^T M;
// used for singular stationarity systems. Returns the minimum-norm solution.
Vector solve_least_squares(const Matrix& M, const Vector& rhs);

enum class LPStatus { optimal, unbounded, infeasible };
enum class LPSense { minimize, maximize };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  double value = 0.0;
  Vector point;  // when optimal
  Vector ray;    // when unbounded: feasible direction improving the objective
};

// min/max c^T x  s.t.  E x = f,  x >= 0.
// Revised simplex (dense tableau) with Bland's rule; two phases.
LPResult lp_solve(const Vector& c, const Matrix& E, const Vector& f,
                  LPSense sense = LPSense::minimize);

// All basic feasible solutions (vertices) of {x >= 0, E x = f}.
// Enumerates column subsets; intended for small systems only.
std::vector<Vector> enumerate_vertices(const Matrix& E, const Vector& f,
                                       double tol = 1e-9);

}  // namespace qpdual
