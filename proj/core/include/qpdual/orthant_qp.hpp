#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "qpdual/linalg.hpp"

namespace qpdual {

enum class ThetaStatus {
  attained,
  minus_infinity,
  undecided,
  infeasible,        // polytope path only
  unbounded_domain,  // polytope path only
};

struct ThetaResult {
  ThetaStatus status = ThetaStatus::undecided;
  double value = std::numeric_limits<double>::quiet_NaN();
  Vector minimizer;       // when attained
  Vector unbounded_ray;   // when minus_infinity
  Vector ray_base;        // point the ray is followed from (origin by default)
  bool approximate = false;

  bool attained() const { return status == ThetaStatus::attained; }
  bool minus_inf() const { return status == ThetaStatus::minus_infinity; }
};

// min x^T Q x + q^T x + r over x >= 0.
// Not copositive Q => minus_infinity with the witness ray. Otherwise all 2^n
// coordinate faces are enumerated (n <= n_max) and the best KKT-feasible
// stationary point is returned. On the copositive boundary, zero-curvature
// rays are classified per the certified linear-decrease test, with an
// escalating box probe before giving up as undecided.
ThetaResult min_quadratic_orthant(const Matrix& Q, const Vector& q, double r,
                                  std::size_t n_max = 14);

// min x^T Q x + q^T x + r over {x >= 0, a_j^T x = b_j for all j}.
// Requires the polytope to be nonempty and bounded; candidates are the
// polytope vertices plus every face-stationary point.
ThetaResult min_quadratic_polytope(const Matrix& Q, const Vector& q, double r,
                                   const std::vector<Vector>& eq_normals,
                                   const Vector& eq_rhs);

}  // namespace qpdual
