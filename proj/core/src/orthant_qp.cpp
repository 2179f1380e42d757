#include "qpdual/orthant_qp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpdual/copositivity.hpp"
#include "qpdual/numkernel.hpp"

namespace qpdual {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double eval_q(const Matrix& Q, const Vector& q, double r, const Vector& x) {
  return Q.quad(x) + dot(q, x) + r;
}

struct Candidate {
  double value;
  Vector x;
  unsigned long active_mask;  // bit set = coordinate pinned at zero
};

// Lexicographic tie-break on the sorted active set: the mask with the
// smaller lowest set bit wins, etc. With the "active = complement of free"
// convention this is just an unsigned compare of the masks.
bool better(const Candidate& a, const Candidate& b) {
  if (a.value < b.value - 1e-12) return true;
  if (b.value < a.value - 1e-12) return false;
  return a.active_mask < b.active_mask;
}

// Projected gradient descent over [0, box]^n with backtracking; a probe,
// not a certificate.
double box_probe_min(const Matrix& Q, const Vector& q, double r, double box,
                     const std::vector<Vector>& starts) {
  const std::size_t n = q.size();
  double best = eval_q(Q, q, r, Vector(n, 0.0));
  for (const auto& s0 : starts) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(s0[i], 0.0, box);
    double fx = eval_q(Q, q, r, x);
    for (int it = 0; it < 2000; ++it) {
      Vector g = Q.mul(x);
      for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * g[i] + q[i];
      double step = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        Vector y(n);
        for (std::size_t i = 0; i < n; ++i)
          y[i] = std::clamp(x[i] - step * g[i], 0.0, box);
        double fy = eval_q(Q, q, r, y);
        if (fy < fx - 1e-14) {
          x = std::move(y);
          fx = fy;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::min(best, fx);
  }
  return best;
}

}  // namespace

ThetaResult min_quadratic_orthant(const Matrix& Q, const Vector& q, double r,
                                  std::size_t n_max) {
  const std::size_t n = q.size();
  if (Q.rows() != n || Q.cols() != n)
    throw std::invalid_argument("min_quadratic_orthant: dimension mismatch");
  if (n > n_max)
    throw std::invalid_argument("min_quadratic_orthant: dimension exceeds n_max");

  ThetaResult out;
  if (n == 0) {
    out.status = ThetaStatus::attained;
    out.value = r;
    return out;
  }

  // Tolerances scale with the data: the dual drives multipliers to 1e8,
  // where an absolute zero band is meaningless.
  double q_scale = 1.0, Q_scale = 1.0;
  for (double v : q) q_scale = std::max(q_scale, std::fabs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Q_scale = std::max(Q_scale, std::fabs(Q(i, j)));
  const double eps_cop = 1e-9 * Q_scale;
  CopositivityVerdict cop = check_copositive(Q, eps_cop, 40);
  if (cop.status == CopositivityStatus::undecided)
    cop = check_copositive(Q, eps_cop, 60);

  if (cop.status == CopositivityStatus::not_copositive) {
    out.status = ThetaStatus::minus_infinity;
    out.unbounded_ray = cop.witness;
    out.ray_base = Vector(n, 0.0);
    out.value = kNegInf;
    return out;
  }

  // Face enumeration: F = set of free coordinates.  The origin only counts
  // as a candidate when it satisfies its own KKT condition (q >= 0).
  Candidate best{eval_q(Q, q, r, Vector(n, 0.0)), Vector(n, 0.0),
                 (n >= 64) ? ~0ul : ((1ul << n) - 1ul)};
  bool have_candidate = true;
  for (double v : q)
    if (v < -1e-9 * q_scale) { have_candidate = false; break; }
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<std::size_t> F;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ul << i)) F.push_back(i);
    const std::size_t k = F.size();
    Matrix Qff(k, k);
    Vector qf(k);
    for (std::size_t a = 0; a < k; ++a) {
      qf[a] = -0.5 * q[F[a]];
      for (std::size_t b = 0; b < k; ++b) Qff(a, b) = Q(F[a], F[b]);
    }
    Vector xf;
    auto sol = solve_linear(Qff, qf);
    if (sol) {
      xf = *sol;
    } else {
      xf = solve_least_squares(Qff, qf);
      Vector res = Qff.mul(xf);
      for (std::size_t a = 0; a < k; ++a) res[a] -= qf[a];
      if (norm2(res) > 1e-8 * (1.0 + norm2(qf))) continue;
    }
    // Iterative refinement: near the copositivity boundary Qff is close to
    // singular and the raw solve can lose enough digits to overestimate the
    // face minimum (and hence Theta) by ~1e-4 at large |u|.
    for (int ref = 0; ref < 2; ++ref) {
      Vector res = Qff.mul(xf);
      for (std::size_t a = 0; a < k; ++a) res[a] = qf[a] - res[a];
      auto corr = solve_linear(Qff, res);
      if (!corr) break;
      for (std::size_t a = 0; a < k; ++a) xf[a] += (*corr)[a];
    }
    bool ok = true;
    for (double v : xf)
      if (v < -1e-12) { ok = false; break; }
    if (!ok) continue;
    Vector x(n, 0.0);
    for (std::size_t a = 0; a < k; ++a) x[F[a]] = std::max(0.0, xf[a]);
    // KKT: nonnegative multipliers on the pinned coordinates.
    Vector g = Q.mul(x);
    bool kkt = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ul << i)) continue;
      if (2.0 * g[i] + q[i] < -1e-7 * std::max(q_scale, Q_scale)) {
        kkt = false;
        break;
      }
    }
    if (!kkt) continue;
    Candidate c{eval_q(Q, q, r, x), std::move(x), ~mask & ((1ul << n) - 1ul)};
    if (!have_candidate || better(c, best)) {
      best = std::move(c);
      have_candidate = true;
    }
  }

  if (cop.status == CopositivityStatus::copositive_not_strict ||
      cop.status == CopositivityStatus::undecided) {
    // Zero-curvature rays: certified decrease when q^T d < -1e-9 and
    // (Q d)_i >= -1e-9 for all i, so L(t d) drops linearly from the origin.
    std::vector<Vector> rays = cop.near_zero_dirs;
    if (cop.has_witness) rays.push_back(cop.witness);
    // Coordinate axes with (near-)zero diagonal are zero-curvature rays the
    // global simplex minimum does not have to reveal.
    for (std::size_t i = 0; i < n; ++i)
      if (std::fabs(Q(i, i)) <= eps_cop) rays.push_back(unit_vector(n, i));
    bool unclassified_descent = false;
    for (const auto& d : rays) {
      double nrm = norm2(d);
      if (nrm <= 0) continue;
      Vector dn = scaled(d, 1.0 / nrm);
      if (std::fabs(Q.quad(dn)) > eps_cop) continue;
      double lin = dot(q, dn);
      if (lin >= -1e-9 * q_scale) continue;  // harmless ray
      Vector Qd = Q.mul(dn);
      bool mono = true;
      for (double v : Qd)
        if (v < -1e-9 * Q_scale) { mono = false; break; }
      if (mono) {
        out.status = ThetaStatus::minus_infinity;
        out.unbounded_ray = dn;
        out.ray_base = Vector(n, 0.0);
        out.value = kNegInf;
        return out;
      }
      unclassified_descent = true;
    }
    if (unclassified_descent || cop.status == CopositivityStatus::undecided) {
      std::vector<Vector> starts;
      starts.push_back(Vector(n, 1.0));
      starts.push_back(best.x);
      for (const auto& d : rays) starts.push_back(scaled(d, 100.0));
      double prev = best.value;
      bool diverging = true;
      for (int k = 2; k <= 6; k += 2) {
        double box = std::pow(10.0, k);
        double probe = box_probe_min(Q, q, r, box, starts);
        if (probe > prev - 1.0) { diverging = false; break; }
        prev = probe;
      }
      if (diverging) {
        out.status = ThetaStatus::undecided;
        out.value = prev;
        return out;
      }
      if (prev < best.value - 1e-7) {
        // The probe found a better point than face enumeration; report it
        // honestly as undecided rather than inventing a minimizer.
        out.status = ThetaStatus::undecided;
        out.value = prev;
        return out;
      }
    }
  }

  if (!have_candidate) {
    // Every stationary face failed numerically and the origin is not KKT:
    // the minimum exists (Q is copositive) but we cannot locate it.
    double probe = box_probe_min(Q, q, r, 1e4, {Vector(n, 1.0), best.x});
    out.status = ThetaStatus::undecided;
    out.value = std::min(best.value, probe);
    return out;
  }

  out.status = ThetaStatus::attained;
  out.value = best.value;
  out.minimizer = best.x;
  return out;
}

ThetaResult min_quadratic_polytope(const Matrix& Q, const Vector& q, double r,
                                   const std::vector<Vector>& eq_normals,
                                   const Vector& eq_rhs) {
  const std::size_t n = q.size();
  const std::size_t m = eq_normals.size();
  if (eq_rhs.size() != m || Q.rows() != n)
    throw std::invalid_argument("min_quadratic_polytope: dimension mismatch");

  Matrix E(m, n);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) E(j, i) = eq_normals[j][i];

  ThetaResult out;
  // Feasibility and boundedness via the LP kernel.
  LPResult feas = lp_solve(Vector(n, 0.0), E, eq_rhs, LPSense::minimize);
  if (feas.status == LPStatus::infeasible) {
    out.status = ThetaStatus::infeasible;
    return out;
  }
  LPResult bound = lp_solve(Vector(n, 1.0), E, eq_rhs, LPSense::maximize);
  if (bound.status == LPStatus::unbounded) {
    out.status = ThetaStatus::unbounded_domain;
    return out;
  }

  std::vector<Vector> verts = enumerate_vertices(E, eq_rhs);
  bool have = false;
  Candidate best{0.0, {}, 0};
  auto offer = [&](Vector x, unsigned long mask) {
    Candidate c{eval_q(Q, q, r, x), std::move(x), mask};
    if (!have || better(c, best)) { best = std::move(c); have = true; }
  };
  auto zero_mask = [&](const Vector& x) {
    unsigned long mask = 0;
    for (std::size_t i = 0; i < n && i < 64; ++i)
      if (x[i] <= 1e-10) mask |= 1ul << i;
    return mask;
  };
  for (const auto& v : verts) offer(v, zero_mask(v));
  // Edge midpoints as cheap refinement candidates.
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      Vector mid(n);
      for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (verts[a][i] + verts[b][i]);
      offer(std::move(mid), 0);
    }

  bool stationary_found = false;
  if (n <= 18) {
    for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
      std::vector<std::size_t> F;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1ul << i)) F.push_back(i);
      const std::size_t k = F.size();
      if (k < m && m > 0) continue;  // equality system cannot hold generically
      Matrix K(k + m, k + m);
      Vector rhs(k + m, 0.0);
      for (std::size_t a = 0; a < k; ++a) {
        rhs[a] = -q[F[a]];
        for (std::size_t b = 0; b < k; ++b) K(a, b) = 2.0 * Q(F[a], F[b]);
        for (std::size_t j = 0; j < m; ++j) {
          K(a, k + j) = eq_normals[j][F[a]];
          K(k + j, a) = eq_normals[j][F[a]];
        }
      }
      for (std::size_t j = 0; j < m; ++j) rhs[k + j] = eq_rhs[j];
      Vector sol;
      auto direct = solve_linear(K, rhs);
      if (direct) {
        sol = *direct;
      } else {
        sol = solve_least_squares(K, rhs);
        Vector res = K.mul(sol);
        for (std::size_t a = 0; a < rhs.size(); ++a) res[a] -= rhs[a];
        if (norm2(res) > 1e-8 * (1.0 + norm2(rhs))) continue;
      }
      bool ok = true;
      for (std::size_t a = 0; a < k; ++a)
        if (sol[a] < -1e-12) { ok = false; break; }
      if (!ok) continue;
      Vector x(n, 0.0);
      for (std::size_t a = 0; a < k; ++a) x[F[a]] = std::max(0.0, sol[a]);
      // Verify the equalities actually hold at the assembled point.
      bool feas_pt = true;
      for (std::size_t j = 0; j < m; ++j)
        if (std::fabs(dot(eq_normals[j], x) - eq_rhs[j]) >
            1e-7 * (1.0 + std::fabs(eq_rhs[j]))) { feas_pt = false; break; }
      if (!feas_pt) continue;
      stationary_found = true;
      offer(std::move(x), ~mask & ((1ul << n) - 1ul));
    }
  }

  if (!have) {
    out.status = ThetaStatus::infeasible;
    return out;
  }
  out.status = ThetaStatus::attained;
  out.value = best.value;
  out.minimizer = best.x;
  out.approximate = !stationary_found && n > 18;
  return out;
}

}  // namespace qpdual
