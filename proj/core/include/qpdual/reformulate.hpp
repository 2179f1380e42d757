#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpdual/qp_model.hpp"

namespace qpdual {

struct ConstraintProvenance {
  std::string family;      // e.g. "a^Tx <= b", "binary complementarity"
  std::size_t source_idx;  // index within the source family
};

struct VariableMapEntry {
  std::string role;   // "x", "t1", "t2", "v"
  std::size_t source_idx;
  std::size_t column;
};

struct ReformulationMap {
  std::string source_kind;
  QPInstance target;
  std::vector<ConstraintProvenance> provenance;
  std::vector<VariableMapEntry> variable_map;
  // For the robust pipeline: the intermediate equality system in z-space.
  MixedIntegerQP target_miqp;
  bool has_target_miqp = false;
};

// (P_M) -> (P_D): the six constraint families in the paper's order,
// 4m + 2s constraints total, objective unchanged.
ReformulationMap miqp_to_pd(const MixedIntegerQP& p);

// The bound M = max{ max over feasible x and scenarios of the scenario
// cost, 0 }; requires the feasible set to be compact (checked upstream).
double compute_M(const RobustMIQP& p);

struct RobustToApOptions {
  // The paper's derivation fixes t_1 + v_{q+1} = M and t_1 - t_2 + v_{q+2}
  // = M; the display tabulates the rhs as -M. Default follows the
  // derivation; the flag reproduces the display variant.
  bool use_display_rhs_signs = false;
};

// (RP) -> (AP): lifts to z = (x, t_1, t_2, v) in R^{n+q+4}, builds W, w,
// a-bar, b-bar, then expands the equality system through the (P_D)
// families, yielding 4(m+q+2) + 2s constraints.
ReformulationMap robust_to_ap(const RobustMIQP& p,
                              const RobustToApOptions& opts = {});

// (HQP) as a QPInstance: objective x^T A x, single constraint
// x^T B x - 1 <= 0.
QPInstance hqp_to_qp(const HQPInstance& h);

// alpha* = min{x^T A x : x >= 0, x^T B x = 1}, well-defined when B is
// strictly copositive; computed as the Rayleigh-ratio minimum over the
// simplex via bisection on copositivity of A - alpha B.
double standard_form_alpha_star(const HQPInstance& h);

struct CopositiveRelaxation {
  Matrix H;                 // (n+1) x (n+1)
  std::vector<Matrix> His;  // one per constraint
  Matrix J0;                // e_0 e_0^T
};

CopositiveRelaxation build_copositive_relaxation(const QPInstance& p);

// z = (1, x) embedding used by the trace identities.
Vector rank_one_embedding(const Vector& x);

}  // namespace qpdual
