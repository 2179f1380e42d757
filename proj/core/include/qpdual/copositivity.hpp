#pragma once

#include <cstddef>
#include <vector>

#include "qpdual/linalg.hpp"

namespace qpdual {

enum class CopositivityStatus {
  strictly_copositive,
  copositive_not_strict,
  not_copositive,
  undecided,
};

struct CopositivityVerdict {
  CopositivityStatus status = CopositivityStatus::undecided;
  // Simplex point with d^T Q d < -eps (not_copositive) or within the zero
  // band (copositive_not_strict).
  Vector witness;
  bool has_witness = false;
  // Certified lower bound on min{x^T Q x : x in the unit simplex}.
  double certified_min = 0.0;
  // Simplex points whose quadratic value fell inside the zero band; these
  // are the zero-curvature ray candidates consumed by the orthant solver.
  std::vector<Vector> near_zero_dirs;
  bool trivial_cone = false;
};

// Polyhedral cone {d >= 0, a_j^T d = 0 for all j, d_i = 0 for i in Z}.
struct ConeDescription {
  std::size_t n = 0;
  std::vector<Vector> normals;       // a_j
  std::vector<std::size_t> zeroed;   // Z
};

// Decides the sign of min{x^T Q x : x in the unit simplex} by simplicial
// branch and bound (longest-edge bisection, vertex-pair lower bounds).
// When the bounds still straddle the zero band at max_depth, the simplex
// minimum is computed exactly by face enumeration instead of reporting
// undecided (only matrices too large for that path stay undecided).
CopositivityVerdict check_copositive(const Matrix& Q, double eps = 1e-9,
                                     int max_depth = 40);

// Verdict for Q restricted to the cone: the cone is intersected with the
// unit simplex, the polytope's vertices V are enumerated, and the problem
// reduces to standard-simplex copositivity of V^T Q V.
CopositivityVerdict check_copositive_on_cone(const Matrix& Q,
                                             const ConeDescription& cone,
                                             double eps = 1e-9,
                                             int max_depth = 40);

// Exact minimum of x^T Q x over the unit simplex via face enumeration
// (2^n faces). Also used as the test oracle escalation path.
struct SimplexMinimum {
  double value = 0.0;
  Vector argmin;
};
SimplexMinimum min_quadratic_form_on_simplex(const Matrix& Q);

}  // namespace qpdual
