#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qpdual/qp_model.hpp"

namespace qpdual {

enum class PrimalStatus { attained, infeasible, unbounded_below, undecided };

struct PrimalResult {
  PrimalStatus status = PrimalStatus::undecided;
  double value = std::numeric_limits<double>::quiet_NaN();
  Vector argmin;                // when attained
  std::string method;           // binary-enumeration / face-enumeration / grid
  bool approximate = false;     // grid-based value with an error bar
  double error_bar = 0.0;
  bool possibly_infeasible = false;
};

// Enumerates the 2^s binary patterns and solves each continuous
// restriction exactly over its polytope. Requires s <= 20 and a bounded
// polytope per pattern.
PrimalResult solve_miqp_bruteforce(const MixedIntegerQP& p);

struct GridOptions {
  double box = 16.0;           // search box [0, R]^n
  std::size_t points = 33;     // per dimension at the coarse level
  int refinements = 2;
};

// Exact face enumeration when every constraint is linear and the feasible
// polytope is bounded; otherwise a multi-resolution grid over [0, R]^n
// (n <= 4) with a resolution-derived error bar.
PrimalResult solve_qp_bruteforce(const QPInstance& p, const GridOptions& opts = {});

// Binary patterns x scenario envelope; the max over scenarios is handled
// exactly by splitting the polytope into scenario-dominance regions.
PrimalResult solve_robust_bruteforce(const RobustMIQP& p);

enum class MembershipVerdict { member, non_member, undecided };

// Query against the image set {(g_0(x),...,g_m(x),f(x)) : x >= 0} + R_+^{m+2}.
struct MembershipQuery {
  Vector target;  // (u_0,...,u_m, r)
  MembershipVerdict verdict = MembershipVerdict::undecided;
  Vector witness;  // x with g_i(x) <= u_i, f(x) <= r, when member
  std::string note;
};

struct MembershipBudget {
  std::size_t max_nodes = 200000;
  int max_depth = 60;
  double member_tol = 1e-9;
};

// member: witness found by grid/branch search. non_member: every cell of a
// branch-and-prune cover of the orthant carries an interval certificate
// that some constraint is violated throughout. Anything else: undecided.
MembershipQuery membership(const QPInstance& p, const Vector& target,
                           const MembershipBudget& budget = {});

}  // namespace qpdual
