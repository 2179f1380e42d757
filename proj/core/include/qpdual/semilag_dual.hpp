#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpdual/orthant_qp.hpp"
#include "qpdual/qp_model.hpp"

namespace qpdual {

struct DualPoint {
  Vector u;
  ThetaResult theta;
};

enum class DualTermination {
  converged,
  iteration_cap,
  dual_unbounded_below_everywhere,
  undecided_inner,
};

struct DualOptions {
  double tol_dual = 1e-6;
  double u_cap = 1e4;
  double u_cap_max = 1e8;
  double eps_ray = 1e-6;
  int max_iterations = 500;
  std::size_t n_max = 14;
};

struct DualResult {
  double best_value = -std::numeric_limits<double>::infinity();
  Vector best_u;
  std::vector<DualPoint> history;
  DualTermination termination = DualTermination::iteration_cap;
  bool unbounded = false;  // best_value is -inf

  bool finite() const { return !unbounded; }
};

enum class GapClass { zero_gap, positive_gap, infinite_gap, inconclusive };

struct GapReport {
  double primal_value = 0.0;
  bool primal_finite = false;
  double dual_value = 0.0;
  bool dual_finite = false;
  double gap = std::numeric_limits<double>::quiet_NaN();
  GapClass classification = GapClass::inconclusive;
  std::vector<std::string> certificates;
};

// Weak duality broken beyond tolerance: indicates a solver bug, surfaced
// as a hard error (CLI exit code 5).
struct WeakDualityViolation : std::runtime_error {
  explicit WeakDualityViolation(const std::string& what)
      : std::runtime_error(what) {}
};

// Theta(u) = inf over the orthant of f + sum u_i g_i.
ThetaResult eval_theta(const QPInstance& p, const Vector& u,
                       std::size_t n_max = 14);

// The aggregated Lagrangian as a single quadratic: Q(u), q(u), r(u).
QuadraticForm lagrangian_form(const QPInstance& p, const Vector& u);

DualResult maximize_dual(const QPInstance& p, const DualOptions& opts = {});

struct PrimalSummary {
  double value = 0.0;
  bool finite = true;     // false: infeasible (+inf)
  bool reliable = true;   // grid oracles may flag low confidence
};

GapReport gap_report(const QPInstance& p, const PrimalSummary& primal,
                     const DualResult& dual,
                     const std::vector<std::string>& certificates = {},
                     double tol_gap = 1e-4);

}  // namespace qpdual
