#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpdual/linalg.hpp"

namespace qpdual {

// One quadratic function x^T A x + b^T x + c.
struct QuadraticForm {
  Matrix A;
  Vector b;
  double c = 0.0;

  double eval(const Vector& x) const { return A.quad(x) + dot(b, x) + c; }
  Vector gradient(const Vector& x) const;  // 2 A x + b
  bool is_linear(double tol = 0.0) const { return A.max_abs() <= tol; }
};

// Continuous QP over the nonnegative orthant with quadratic inequality
// constraints g_i(x) <= 0, i = 0..m. The constraint list may be empty.
struct QPInstance {
  std::size_t n = 0;
  QuadraticForm objective;
  std::vector<QuadraticForm> constraints;  // index i = 0..m

  std::size_t constraint_count() const { return constraints.size(); }
  double evaluate_objective(const Vector& x) const;
  double evaluate_constraint(std::size_t i, const Vector& x) const;
  bool is_feasible(const Vector& x, double tol = 1e-9) const;
};

// min x^T A x + b^T x + c  s.t.  a_j^T x = b_j (j = 1..m),
// x_i in {0,1} for i in B = {first s indices}, x >= 0.
struct MixedIntegerQP {
  std::size_t n = 0;
  QuadraticForm objective;
  std::vector<Vector> eq_normals;  // a_j
  Vector eq_rhs;                   // b_j
  std::size_t s = 0;               // binary indices are 0..s-1

  std::size_t m() const { return eq_normals.size(); }
};

// min x^T A x  s.t.  x^T B x <= 1, x >= 0.
struct HQPInstance {
  Matrix A;
  Matrix B;
};

// Constraint Hessians are alpha_i * A; only the scalars are stored.
struct UniformQPInstance {
  std::size_t n = 0;
  Matrix A;
  Vector b;
  double c = 0.0;
  Vector alphas;                 // alpha_i, i = 0..m
  std::vector<Vector> lin;       // b_i
  Vector consts;                 // c_i
};

// Robust mixed integer QP with polyhedral cost uncertainty (scenario
// vertices xi^(k)) and spectral-norm Hessian uncertainty of radius rho.
struct RobustMIQP {
  std::size_t n = 0;
  Matrix A0;
  double rho = 0.0;
  Vector c0;
  std::vector<Vector> cost_generators;   // c_l, l = 1..L_gen
  std::vector<Vector> scenarios;         // xi^(k) in R^{L_gen}, k = 1..q
  std::vector<Vector> eq_normals;        // a_j
  Vector eq_rhs;                         // b_j
  std::size_t s = 0;

  std::size_t m() const { return eq_normals.size(); }
  std::size_t q() const { return scenarios.size(); }
  std::size_t generator_count() const { return cost_generators.size(); }
  // c_0 + sum_l xi^(k)_l c_l
  Vector scenario_cost(std::size_t k) const;
};

struct ValidationIssue {
  enum class Severity { warning, error };
  Severity severity;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const;  // no errors (warnings allowed)
  std::size_t warning_count() const;
};

// Validation symmetrizes matrices in place ((M + M^T)/2 leaves every
// quadratic form unchanged) and reports that as a warning, not an error.
ValidationReport validate(QPInstance& p);
ValidationReport validate(MixedIntegerQP& p);
ValidationReport validate(HQPInstance& p);
ValidationReport validate(UniformQPInstance& p);
ValidationReport validate(RobustMIQP& p);

// View of a UniformQPInstance as a plain QPInstance.
QPInstance uniform_to_qp(const UniformQPInstance& p);

}  // namespace qpdual
