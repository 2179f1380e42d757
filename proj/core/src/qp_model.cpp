#include "qpdual/qp_model.hpp"

#include <stdexcept>

namespace qpdual {

Vector QuadraticForm::gradient(const Vector& x) const {
  Vector g = A.mul(x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 2.0 * g[i] + b[i];
  return g;
}

double QPInstance::evaluate_objective(const Vector& x) const {
  if (x.size() != n) throw std::invalid_argument("evaluate_objective: dimension mismatch");
  return objective.eval(x);
}

double QPInstance::evaluate_constraint(std::size_t i, const Vector& x) const {
  if (x.size() != n) throw std::invalid_argument("evaluate_constraint: dimension mismatch");
  return constraints.at(i).eval(x);
}

bool QPInstance::is_feasible(const Vector& x, double tol) const {
  for (double v : x)
    if (v < -tol) return false;
  for (const auto& g : constraints)
    if (g.eval(x) > tol) return false;
  return true;
}

bool ValidationReport::ok() const {
  for (const auto& i : issues)
    if (i.severity == ValidationIssue::Severity::error) return false;
  return true;
}

std::size_t ValidationReport::warning_count() const {
  std::size_t c = 0;
  for (const auto& i : issues)
    if (i.severity == ValidationIssue::Severity::warning) ++c;
  return c;
}

namespace {

void check_form(QuadraticForm& f, std::size_t n, const std::string& name,
                ValidationReport& rep) {
  using S = ValidationIssue::Severity;
  if (f.A.rows() != n || f.A.cols() != n)
    rep.issues.push_back({S::error, name + ": matrix dimension mismatch"});
  else if (!f.A.is_symmetric()) {
    f.A = f.A.symmetrized();
    rep.issues.push_back({S::warning, name + ": symmetrized"});
  }
  if (f.b.size() != n)
    rep.issues.push_back({S::error, name + ": vector dimension mismatch"});
  if (!f.A.all_finite())
    rep.issues.push_back({S::error, name + ": non-finite matrix entries"});
}

void check_matrix(Matrix& M, std::size_t n, const std::string& name,
                  ValidationReport& rep) {
  using S = ValidationIssue::Severity;
  if (M.rows() != n || M.cols() != n) {
    rep.issues.push_back({S::error, name + ": dimension mismatch"});
    return;
  }
  if (!M.is_symmetric()) {
    M = M.symmetrized();
    rep.issues.push_back({S::warning, name + ": symmetrized"});
  }
}

}  // namespace

ValidationReport validate(QPInstance& p) {
  ValidationReport rep;
  check_form(p.objective, p.n, "objective", rep);
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    check_form(p.constraints[i], p.n, "constraint " + std::to_string(i), rep);
  return rep;
}

ValidationReport validate(MixedIntegerQP& p) {
  ValidationReport rep;
  using S = ValidationIssue::Severity;
  check_form(p.objective, p.n, "objective", rep);
  if (p.s > p.n)
    rep.issues.push_back({S::error, "binary set exceeds dimension"});
  if (p.eq_rhs.size() != p.eq_normals.size())
    rep.issues.push_back({S::error, "equality rhs count mismatch"});
  for (std::size_t j = 0; j < p.eq_normals.size(); ++j)
    if (p.eq_normals[j].size() != p.n)
      rep.issues.push_back({S::error, "equality " + std::to_string(j) + ": dimension mismatch"});
  return rep;
}

ValidationReport validate(HQPInstance& p) {
  ValidationReport rep;
  using S = ValidationIssue::Severity;
  if (p.A.rows() != p.B.rows())
    rep.issues.push_back({S::error, "A and B dimensions disagree"});
  check_matrix(p.A, p.A.rows(), "A", rep);
  check_matrix(p.B, p.A.rows(), "B", rep);
  return rep;
}

ValidationReport validate(UniformQPInstance& p) {
  ValidationReport rep;
  using S = ValidationIssue::Severity;
  check_matrix(p.A, p.n, "A", rep);
  if (p.b.size() != p.n)
    rep.issues.push_back({S::error, "b dimension mismatch"});
  if (p.lin.size() != p.alphas.size() || p.consts.size() != p.alphas.size())
    rep.issues.push_back({S::error, "constraint data counts disagree"});
  for (std::size_t i = 0; i < p.lin.size(); ++i)
    if (p.lin[i].size() != p.n)
      rep.issues.push_back({S::error, "b_" + std::to_string(i) + " dimension mismatch"});
  return rep;
}

ValidationReport validate(RobustMIQP& p) {
  ValidationReport rep;
  using S = ValidationIssue::Severity;
  check_matrix(p.A0, p.n, "A_0", rep);
  if (p.rho < 0)
    rep.issues.push_back({S::error, "rho must be nonnegative"});
  if (p.c0.size() != p.n)
    rep.issues.push_back({S::error, "c_0 dimension mismatch"});
  if (p.scenarios.empty())
    rep.issues.push_back({S::error, "at least one scenario vertex required"});
  for (const auto& g : p.cost_generators)
    if (g.size() != p.n)
      rep.issues.push_back({S::error, "cost generator dimension mismatch"});
  for (const auto& xi : p.scenarios)
    if (xi.size() != p.cost_generators.size())
      rep.issues.push_back({S::error, "scenario vertex dimension mismatch"});
  if (p.s > p.n)
    rep.issues.push_back({S::error, "binary set exceeds dimension"});
  if (p.eq_rhs.size() != p.eq_normals.size())
    rep.issues.push_back({S::error, "equality rhs count mismatch"});
  for (const auto& a : p.eq_normals)
    if (a.size() != p.n)
      rep.issues.push_back({S::error, "equality dimension mismatch"});
  return rep;
}

Vector RobustMIQP::scenario_cost(std::size_t k) const {
  Vector c = c0;
  const Vector& xi = scenarios.at(k);
  for (std::size_t l = 0; l < cost_generators.size(); ++l)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += xi[l] * cost_generators[l][i];
  return c;
}

QPInstance uniform_to_qp(const UniformQPInstance& p) {
  QPInstance q;
  q.n = p.n;
  q.objective = {p.A, p.b, p.c};
  for (std::size_t i = 0; i < p.alphas.size(); ++i)
    q.constraints.push_back({p.A * p.alphas[i], p.lin[i], p.consts[i]});
  return q;
}

}  // namespace qpdual
