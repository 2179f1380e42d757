#include "qpdual/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpdual/copositivity.hpp"
#include "qpdual/numkernel.hpp"

namespace qpdual {

namespace {

Matrix outer(const Vector& a) {
  Matrix M(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) M(i, j) = a[i] * a[j];
  return M;
}

QuadraticForm linear_constraint(const Vector& a, double rhs, double sign,
                                std::size_t n) {
  // sign * (a^T x - rhs) <= 0
  QuadraticForm g;
  g.A = Matrix(n, n);
  g.b = scaled(a, sign);
  g.c = -sign * rhs;
  return g;
}

// Is {d >= 0, a_j^T d = 0, d_i = 0 (i < s)} = {0}? Decided by the LP
// max e^T d over the cone sliced with e^T d <= 1.
bool cone_is_trivial(const std::vector<Vector>& normals, const Vector& /*rhs*/,
                     std::size_t n, std::size_t s) {
  const std::size_t rows = normals.size() + s + 1;
  Matrix E(rows, n + 1);  // extra column: slack of e^T d <= 1
  Vector f(rows, 0.0);
  std::size_t r = 0;
  for (const auto& a : normals) {
    for (std::size_t j = 0; j < n; ++j) E(r, j) = a[j];
    ++r;
  }
  for (std::size_t i = 0; i < s; ++i) E(r++, i) = 1.0;
  for (std::size_t j = 0; j < n; ++j) E(r, j) = 1.0;
  E(r, n) = 1.0;
  f[r] = 1.0;
  Vector c(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) c[j] = 1.0;
  LPResult lp = lp_solve(c, E, f, LPSense::maximize);
  return lp.status == LPStatus::optimal && lp.value <= 1e-9;
}

}  // namespace

ReformulationMap miqp_to_pd(const MixedIntegerQP& p) {
  const std::size_t n = p.n;
  const std::size_t m = p.m();
  ReformulationMap out;
  out.source_kind = "miqp";
  out.target.n = n;
  out.target.objective = p.objective;
  auto& cs = out.target.constraints;

  for (std::size_t j = 0; j < m; ++j) {
    cs.push_back(linear_constraint(p.eq_normals[j], p.eq_rhs[j], +1.0, n));
    out.provenance.push_back({"a^Tx - b <= 0", j});
  }
  for (std::size_t j = 0; j < m; ++j) {
    cs.push_back(linear_constraint(p.eq_normals[j], p.eq_rhs[j], -1.0, n));
    out.provenance.push_back({"-a^Tx + b <= 0", j});
  }
  for (std::size_t j = 0; j < m; ++j) {
    QuadraticForm g;
    g.A = outer(p.eq_normals[j]);
    g.b = Vector(n, 0.0);
    g.c = -p.eq_rhs[j] * p.eq_rhs[j];
    cs.push_back(g);
    out.provenance.push_back({"(a^Tx)^2 - b^2 <= 0", j});
  }
  for (std::size_t j = 0; j < m; ++j) {
    QuadraticForm g;
    g.A = outer(p.eq_normals[j]) * -1.0;
    g.b = Vector(n, 0.0);
    g.c = p.eq_rhs[j] * p.eq_rhs[j];
    cs.push_back(g);
    out.provenance.push_back({"-(a^Tx)^2 + b^2 <= 0", j});
  }
  for (std::size_t i = 0; i < p.s; ++i) {
    QuadraticForm g;
    g.A = Matrix(n, n);
    g.A(i, i) = 1.0;
    g.b = Vector(n, 0.0);
    g.b[i] = -1.0;
    g.c = 0.0;
    cs.push_back(g);
    out.provenance.push_back({"x_i(x_i - 1) <= 0", i});
  }
  for (std::size_t i = 0; i < p.s; ++i) {
    QuadraticForm g;
    g.A = Matrix(n, n);
    g.A(i, i) = -1.0;
    g.b = Vector(n, 0.0);
    g.b[i] = 1.0;
    g.c = 0.0;
    cs.push_back(g);
    out.provenance.push_back({"-x_i(x_i - 1) <= 0", i});
  }
  for (std::size_t i = 0; i < n; ++i)
    out.variable_map.push_back({"x", i, i});
  return out;
}

double compute_M(const RobustMIQP& p) {
  if (!cone_is_trivial(p.eq_normals, p.eq_rhs, p.n, p.s))
    throw std::invalid_argument("compute_M: feasible set not certified compact");
  if (p.s > 20) throw std::invalid_argument("compute_M: too many binaries");

  const std::size_t n = p.n;
  const std::size_t m = p.m();
  double best = 0.0;
  bool any_feasible = false;
  for (unsigned long pat = 0; pat < (1ul << p.s); ++pat) {
    std::vector<Vector> normals = p.eq_normals;
    Vector rhs = p.eq_rhs;
    for (std::size_t i = 0; i < p.s; ++i) {
      normals.push_back(unit_vector(n, i));
      rhs.push_back((pat >> i) & 1 ? 1.0 : 0.0);
    }
    Matrix E(normals.size(), n);
    for (std::size_t j = 0; j < normals.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) E(j, i) = normals[j][i];
    (void)m;
    for (std::size_t k = 0; k < p.q(); ++k) {
      Vector c = p.scenario_cost(k);
      LPResult lp = lp_solve(c, E, rhs, LPSense::maximize);
      if (lp.status == LPStatus::infeasible) break;
      if (lp.status == LPStatus::unbounded)
        throw std::runtime_error("compute_M: unbounded despite compactness check");
      any_feasible = true;
      best = std::max(best, lp.value);
    }
  }
  if (!any_feasible) throw std::invalid_argument("compute_M: empty feasible set");
  return std::max(best, 0.0);
}

ReformulationMap robust_to_ap(const RobustMIQP& p,
                              const RobustToApOptions& opts) {
  const double M = compute_M(p);
  const std::size_t n = p.n;
  const std::size_t m = p.m();
  const std::size_t q = p.q();
  const std::size_t nz = n + q + 4;
  const std::size_t l = m + q + 2;

  MixedIntegerQP z;
  z.n = nz;
  z.s = p.s;
  z.objective.A = Matrix(nz, nz);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) z.objective.A(i, j) = p.A0(i, j);
    z.objective.A(i, i) += p.rho;
  }
  z.objective.b = Vector(nz, 0.0);
  z.objective.b[n] = 1.0;       // t_1
  z.objective.b[n + 1] = -1.0;  // t_2
  z.objective.c = 0.0;

  auto vcol = [&](std::size_t k) { return n + 2 + (k - 1); };  // v_k, k = 1..q+2

  for (std::size_t j = 1; j <= l; ++j) {
    Vector a(nz, 0.0);
    double b = 0.0;
    if (j <= m) {
      for (std::size_t i = 0; i < n; ++i) a[i] = p.eq_normals[j - 1][i];
      b = p.eq_rhs[j - 1];
    } else if (j <= m + q) {
      Vector c = p.scenario_cost(j - m - 1);
      for (std::size_t i = 0; i < n; ++i) a[i] = c[i];
      a[n] = -1.0;
      a[n + 1] = 1.0;
      a[vcol(j - m)] = 1.0;
      b = 0.0;
    } else if (j == m + q + 1) {
      a[n] = 1.0;
      a[vcol(q + 1)] = 1.0;
      b = opts.use_display_rhs_signs ? -M : M;
    } else {  // j == m + q + 2
      a[n] = 1.0;
      a[n + 1] = -1.0;
      a[vcol(q + 2)] = 1.0;
      b = opts.use_display_rhs_signs ? -M : M;
    }
    z.eq_normals.push_back(std::move(a));
    z.eq_rhs.push_back(b);
  }

  ReformulationMap out = miqp_to_pd(z);
  out.source_kind = "robust_miqp";
  out.target_miqp = z;
  out.has_target_miqp = true;
  out.variable_map.clear();
  for (std::size_t i = 0; i < n; ++i) out.variable_map.push_back({"x", i, i});
  out.variable_map.push_back({"t1", 0, n});
  out.variable_map.push_back({"t2", 0, n + 1});
  for (std::size_t k = 1; k <= q + 2; ++k)
    out.variable_map.push_back({"v", k, vcol(k)});
  return out;
}

QPInstance hqp_to_qp(const HQPInstance& h) {
  const std::size_t n = h.A.rows();
  QPInstance p;
  p.n = n;
  p.objective = {h.A, Vector(n, 0.0), 0.0};
  p.constraints.push_back({h.B, Vector(n, 0.0), -1.0});
  return p;
}

double standard_form_alpha_star(const HQPInstance& h) {
  CopositivityVerdict vb = check_copositive(h.B);
  if (vb.status != CopositivityStatus::strictly_copositive)
    throw std::invalid_argument(
        "standard_form_alpha_star: B is not strictly copositive");
  const std::size_t n = h.A.rows();

  // alpha* = min over the simplex of d^T A d / d^T B d; the scalar
  // s(alpha) = min_simplex d^T (A - alpha B) d is decreasing in alpha and
  // alpha* is its root. Bisection with exact simplex minima.
  auto s_of = [&](double alpha) {
    Matrix Q = h.A - h.B * alpha;
    return min_quadratic_form_on_simplex(Q).value;
  };
  double lo = 0.0, hi = 0.0;
  {
    SimplexMinimum bmin = min_quadratic_form_on_simplex(h.B);
    double bden = std::max(bmin.value, 1e-12);
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) amax = std::max(amax, std::fabs(h.A(i, j)));
    hi = amax / bden + 1.0;
    lo = -hi;
  }
  while (s_of(lo) <= 0.0) lo *= 2.0;
  while (s_of(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::fabs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (s_of(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

CopositiveRelaxation build_copositive_relaxation(const QPInstance& p) {
  const std::size_t n = p.n;
  auto embed = [&](const QuadraticForm& f) {
    Matrix H(n + 1, n + 1);
    H(0, 0) = f.c;
    for (std::size_t i = 0; i < n; ++i) {
      H(0, i + 1) = 0.5 * f.b[i];
      H(i + 1, 0) = 0.5 * f.b[i];
      for (std::size_t j = 0; j < n; ++j) H(i + 1, j + 1) = f.A(i, j);
    }
    return H;
  };
  CopositiveRelaxation out;
  out.H = embed(p.objective);
  for (const auto& g : p.constraints) out.His.push_back(embed(g));
  out.J0 = Matrix(n + 1, n + 1);
  out.J0(0, 0) = 1.0;
  return out;
}

Vector rank_one_embedding(const Vector& x) {
  Vector z(x.size() + 1, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) z[i + 1] = x[i];
  return z;
}

}  // namespace qpdual
