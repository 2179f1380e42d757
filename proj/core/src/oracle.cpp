#include "qpdual/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qpdual/numkernel.hpp"
#include "qpdual/orthant_qp.hpp"

namespace qpdual {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 0 * inf = 0 throughout the interval code: coordinates pinned to zero
// kill their cross terms no matter how far the cell extends.
double mul0(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

PrimalResult from_theta(const ThetaResult& t, std::size_t n,
                        const std::string& method) {
  PrimalResult out;
  out.method = method;
  switch (t.status) {
    case ThetaStatus::attained:
      out.status = PrimalStatus::attained;
      out.value = t.value;
      out.argmin.assign(t.minimizer.begin(), t.minimizer.begin() + n);
      break;
    case ThetaStatus::infeasible:
      out.status = PrimalStatus::infeasible;
      out.value = kInf;
      break;
    case ThetaStatus::minus_infinity:
      out.status = PrimalStatus::unbounded_below;
      out.value = -kInf;
      break;
    case ThetaStatus::unbounded_domain:
      throw std::invalid_argument("oracle: continuous restriction unbounded");
    default:
      out.status = PrimalStatus::undecided;
  }
  return out;
}

void keep_best(PrimalResult& best, const PrimalResult& cand) {
  if (cand.status == PrimalStatus::infeasible) return;
  if (cand.status == PrimalStatus::unbounded_below) {
    best = cand;
    return;
  }
  if (best.status != PrimalStatus::attained || cand.value < best.value) best = cand;
}

}  // namespace

PrimalResult solve_miqp_bruteforce(const MixedIntegerQP& p) {
  if (p.s > 20) throw std::invalid_argument("solve_miqp_bruteforce: s > 20");
  const std::size_t n = p.n;
  PrimalResult best;
  best.status = PrimalStatus::infeasible;
  best.value = kInf;
  best.method = "binary-enumeration";

  for (unsigned long pat = 0; pat < (1ul << p.s); ++pat) {
    std::vector<Vector> normals = p.eq_normals;
    Vector rhs = p.eq_rhs;
    for (std::size_t i = 0; i < p.s; ++i) {
      normals.push_back(unit_vector(n, i));
      rhs.push_back((pat >> i) & 1 ? 1.0 : 0.0);
    }
    ThetaResult t = min_quadratic_polytope(p.objective.A, p.objective.b,
                                           p.objective.c, normals, rhs);
    if (t.status == ThetaStatus::infeasible) continue;
    PrimalResult cand = from_theta(t, n, "binary-enumeration");
    keep_best(best, cand);
  }
  return best;
}

PrimalResult solve_qp_bruteforce(const QPInstance& p, const GridOptions& opts) {
  const std::size_t n = p.n;
  const std::size_t m = p.constraint_count();

  bool all_linear = true;
  for (const auto& g : p.constraints)
    if (g.A.max_abs() > 1e-14) all_linear = false;

  if (all_linear) {
    // {x >= 0, a_i^T x + c_i <= 0}: slack per constraint, then the exact
    // polytope path (bounded feasible set required).
    const std::size_t nv = n + m;
    std::vector<Vector> normals;
    Vector rhs;
    Matrix E(m, nv);
    for (std::size_t i = 0; i < m; ++i) {
      Vector a(nv, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        a[j] = p.constraints[i].b[j];
        E(i, j) = a[j];
      }
      a[n + i] = 1.0;
      E(i, n + i) = 1.0;
      normals.push_back(std::move(a));
      rhs.push_back(-p.constraints[i].c);
    }
    Vector ones(nv, 0.0);
    for (std::size_t j = 0; j < n; ++j) ones[j] = 1.0;
    LPResult probe = lp_solve(ones, E, rhs, LPSense::maximize);
    if (probe.status == LPStatus::infeasible) {
      PrimalResult out;
      out.status = PrimalStatus::infeasible;
      out.value = kInf;
      out.method = "face-enumeration";
      return out;
    }
    if (probe.status == LPStatus::optimal) {
      Matrix Q(nv, nv);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Q(i, j) = p.objective.A(i, j);
      Vector q(nv, 0.0);
      for (std::size_t j = 0; j < n; ++j) q[j] = p.objective.b[j];
      ThetaResult t =
          min_quadratic_polytope(Q, q, p.objective.c, normals, rhs);
      return from_theta(t, n, "face-enumeration");
    }
    // Unbounded polytope: fall through to the grid.
  }

  if (n > 4)
    throw std::invalid_argument("solve_qp_bruteforce: grid mode limited to n <= 4");

  PrimalResult out;
  out.method = "grid";
  out.approximate = true;
  const double R = opts.box;
  std::size_t per = opts.points;
  if (n == 4) per = std::min<std::size_t>(per, 21);

  Vector best_x;
  double best_val = kInf;
  bool found = false;

  auto offer = [&](const Vector& x, double v) {
    if (!found || v < best_val) {
      best_val = v;
      best_x = x;
      found = true;
    }
  };

  // Treat each grid point as a ray direction and minimize the objective
  // exactly over the feasible scalings t*x; this resolves minima on curved
  // constraint boundaries that a bare lattice steps over.
  using Iv = std::pair<double, double>;
  auto intersect = [](const std::vector<Iv>& a, const std::vector<Iv>& b) {
    std::vector<Iv> out;
    for (const auto& [al, au] : a)
      for (const auto& [bl, bu] : b) {
        double l = std::max(al, bl), u = std::min(au, bu);
        if (l <= u) out.push_back({l, u});
      }
    return out;
  };
  auto ray_min = [&](const Vector& x) {
    double xmax = 0.0;
    for (double v : x) xmax = std::max(xmax, v);
    if (xmax <= 0.0) {
      if (p.is_feasible(x, 1e-9)) offer(x, p.objective.eval(x));
      return;
    }
    const double t_cap = R / xmax;  // keep t*x inside [0, R]^n
    std::vector<Iv> feas{{0.0, t_cap}};
    for (const auto& g : p.constraints) {
      double a = g.A.quad(x), b = dot(g.b, x), c = g.c - 1e-12;
      std::vector<Iv> s;
      if (std::fabs(a) < 1e-14) {
        if (std::fabs(b) < 1e-14) {
          if (c <= 0.0) s.push_back({0.0, t_cap});
        } else if (b > 0.0) {
          s.push_back({0.0, -c / b});
        } else {
          s.push_back({std::max(0.0, -c / b), t_cap});
        }
      } else {
        double disc = b * b - 4.0 * a * c;
        if (a > 0.0) {
          if (disc >= 0.0) {
            double r1 = (-b - std::sqrt(disc)) / (2.0 * a);
            double r2 = (-b + std::sqrt(disc)) / (2.0 * a);
            s.push_back({r1, r2});
          }
        } else if (disc < 0.0) {
          s.push_back({0.0, t_cap});
        } else {
          double r1 = (-b + std::sqrt(disc)) / (2.0 * a);
          double r2 = (-b - std::sqrt(disc)) / (2.0 * a);
          s.push_back({-kInf, r1});
          s.push_back({r2, kInf});
        }
      }
      feas = intersect(feas, s);
      if (feas.empty()) return;
    }
    double alpha = p.objective.A.quad(x), beta = dot(p.objective.b, x),
           gamma = p.objective.c;
    for (const auto& [l, u] : feas) {
      for (double t : {l, u}) {
        Vector y = scaled(x, t);
        offer(y, alpha * t * t + beta * t + gamma);
      }
      if (alpha > 0.0) {
        double tv = -beta / (2.0 * alpha);
        if (tv > l && tv < u) {
          Vector y = scaled(x, tv);
          offer(y, alpha * tv * tv + beta * tv + gamma);
        }
      }
    }
  };

  auto sweep = [&](const Vector& lo, const Vector& hi) {
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      Vector x(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = std::max(0.0, lo[i] + (hi[i] - lo[i]) * idx[i] / double(per - 1));
      ray_min(x);
      std::size_t d = 0;
      while (d < n && ++idx[d] == per) idx[d++] = 0;
      if (d == n) break;
    }
  };

  Vector lo(n, 0.0), hi(n, R);
  sweep(lo, hi);
  double h = R / double(per - 1);
  for (int r = 0; r < opts.refinements && found; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::max(0.0, best_x[i] - 2.0 * h);
      hi[i] = best_x[i] + 2.0 * h;
    }
    sweep(lo, hi);
    h = 4.0 * h / double(per - 1);
  }

  if (!found) {
    out.status = PrimalStatus::undecided;
    out.value = kInf;
    out.possibly_infeasible = true;
    return out;
  }
  out.status = PrimalStatus::attained;
  out.value = best_val;
  out.argmin = best_x;
  // First-order resolution bound: |f(x*) - f(x_grid)| <= L h with L a crude
  // gradient bound over the box.
  double L = 2.0 * p.objective.A.max_abs() * double(n) * R + norm_inf(p.objective.b) * double(n);
  out.error_bar = h * std::sqrt(double(n)) * std::max(L, 1.0);
  return out;
}

PrimalResult solve_robust_bruteforce(const RobustMIQP& p) {
  if (p.s > 20) throw std::invalid_argument("solve_robust_bruteforce: s > 20");
  const std::size_t n = p.n;
  const std::size_t q = std::max<std::size_t>(p.q(), 1);

  std::vector<Vector> costs;
  for (std::size_t k = 0; k < q; ++k)
    costs.push_back(p.q() == 0 ? p.c0 : p.scenario_cost(k));

  Matrix Qx = p.A0;
  for (std::size_t i = 0; i < n; ++i) Qx(i, i) += p.rho;

  PrimalResult best;
  best.status = PrimalStatus::infeasible;
  best.value = kInf;
  best.method = "binary-enumeration";

  for (unsigned long pat = 0; pat < (1ul << p.s); ++pat) {
    for (std::size_t k = 0; k < q; ++k) {
      // Dominance region of scenario k: (c_j - c_k)^T x <= 0 for all j,
      // written with one slack per row; the envelope equals c_k^T x there.
      const std::size_t nv = n + (q - 1);
      std::vector<Vector> normals;
      Vector rhs;
      for (const auto& a0 : p.eq_normals) {
        Vector a(nv, 0.0);
        for (std::size_t i = 0; i < n; ++i) a[i] = a0[i];
        normals.push_back(std::move(a));
      }
      rhs = p.eq_rhs;
      for (std::size_t i = 0; i < p.s; ++i) {
        normals.push_back(unit_vector(nv, i));
        rhs.push_back((pat >> i) & 1 ? 1.0 : 0.0);
      }
      std::size_t slack = n;
      for (std::size_t j = 0; j < q; ++j) {
        if (j == k) continue;
        Vector a(nv, 0.0);
        for (std::size_t i = 0; i < n; ++i) a[i] = costs[j][i] - costs[k][i];
        a[slack++] = 1.0;
        normals.push_back(std::move(a));
        rhs.push_back(0.0);
      }
      Matrix Q(nv, nv);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < n; ++jj) Q(i, jj) = Qx(i, jj);
      Vector qv(nv, 0.0);
      for (std::size_t i = 0; i < n; ++i) qv[i] = costs[k][i];
      ThetaResult t = min_quadratic_polytope(Q, qv, 0.0, normals, rhs);
      if (t.status == ThetaStatus::infeasible) continue;
      keep_best(best, from_theta(t, n, "binary-enumeration"));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Membership.

namespace {

struct ShiftedSystem {
  std::vector<QuadraticForm> cs;  // all constraints including the epigraph row
  Vector thr;                     // thresholds u_0..u_m, r
  std::size_t n = 0;
};

ShiftedSystem build_system(const QPInstance& p, const Vector& target) {
  if (target.size() != p.constraint_count() + 1)
    throw std::invalid_argument("membership: target dimension mismatch");
  ShiftedSystem s;
  s.n = p.n;
  for (std::size_t i = 0; i < p.constraint_count(); ++i) {
    s.cs.push_back(p.constraints[i]);
    s.thr.push_back(target[i]);
  }
  s.cs.push_back(p.objective);
  s.thr.push_back(target.back());
  return s;
}

bool satisfies(const ShiftedSystem& s, const Vector& x, double tol) {
  for (std::size_t i = 0; i < s.cs.size(); ++i)
    if (s.cs[i].eval(x) > s.thr[i] + tol) return false;
  return true;
}

// Interval lower bound of a quadratic over the box [lo, hi] inside the
// orthant (all lo >= 0; hi entries may be +inf).
double interval_lower(const QuadraticForm& g, const Vector& lo, const Vector& hi,
                      std::size_t skip = std::size_t(-1)) {
  const std::size_t n = lo.size();
  double s = g.c;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == skip) continue;
    double a = g.A(i, i);
    if (a >= 0)
      s += mul0(a, lo[i] * lo[i]);
    else
      s += mul0(a, hi[i] * hi[i]);
    double b = g.b[i];
    s += b >= 0 ? mul0(b, lo[i]) : mul0(b, hi[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == skip) continue;
      double w = g.A(i, j) + g.A(j, i);
      if (w >= 0)
        s += mul0(w, mul0(lo[i], lo[j]));
      else
        s += mul0(w, mul0(hi[i], hi[j]));
    }
    if (s == -kInf) return -kInf;
  }
  return s;
}

// Lower interval of the linear coefficient of x_j in g over the box.
double beta_lower(const QuadraticForm& g, const Vector& lo, const Vector& hi,
                  std::size_t j) {
  double b = g.b[j];
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (i == j) continue;
    double w = g.A(j, i) + g.A(i, j);
    b += w >= 0 ? mul0(w, lo[i]) : mul0(w, hi[i]);
    if (b == -kInf) return -kInf;
  }
  return b;
}

enum class ContractOutcome { unchanged, tightened, empty };

// Contract [lo_j, hi_j] against the relaxation
// alpha x^2 + beta_lo x + gamma_lo <= t (valid for x_j >= 0).
ContractOutcome contract_coord(const QuadraticForm& g, double t, Vector& lo,
                               Vector& hi, std::size_t j) {
  double alpha = g.A(j, j);
  double blo = beta_lower(g, lo, hi, j);
  double glo = interval_lower(g, lo, hi, j);
  if (!std::isfinite(blo) || !std::isfinite(glo)) return ContractOutcome::unchanged;

  double a = lo[j], b = hi[j];
  double na = a, nb = b;
  if (alpha > 1e-14) {
    double disc = blo * blo - 4.0 * alpha * (glo - t);
    if (disc < 0) return ContractOutcome::empty;
    double sq = std::sqrt(disc);
    double r1 = (-blo - sq) / (2.0 * alpha);
    double r2 = (-blo + sq) / (2.0 * alpha);
    na = std::max(a, r1);
    nb = std::min(b, r2);
  } else if (alpha < -1e-14) {
    double disc = blo * blo - 4.0 * alpha * (glo - t);
    if (disc > 0) {
      double sq = std::sqrt(disc);
      double r1 = (-blo + sq) / (2.0 * alpha);  // smaller root (alpha < 0)
      double r2 = (-blo - sq) / (2.0 * alpha);
      if (a > r1 && b < r2) return ContractOutcome::empty;
      if (a > r1) na = std::max(a, r2);
      if (b < r2 && b >= r1) nb = std::min(b, r1);
    }
  } else {
    if (blo > 1e-14) {
      nb = std::min(b, (t - glo) / blo);
    } else if (blo < -1e-14) {
      na = std::max(a, (t - glo) / blo);
    } else if (glo > t) {
      return ContractOutcome::empty;
    }
  }
  if (na > nb + 1e-15) return ContractOutcome::empty;
  nb = std::max(na, nb);
  bool changed = na > a + 1e-15 || nb < b * (1.0 - 1e-12) - 1e-15;
  lo[j] = na;
  hi[j] = nb;
  return changed ? ContractOutcome::tightened : ContractOutcome::unchanged;
}

struct Cell {
  Vector lo, hi;
  int depth = 0;
};

// Deterministic member pre-pass: linear, integer and dyadic-log grids plus
// local refinement around the best near-miss.
bool grid_member_search(const ShiftedSystem& s, double tol, Vector* witness) {
  const std::size_t n = s.n;
  double best_short = kInf;
  Vector best_x(n, 0.0);
  auto try_point = [&](const Vector& x) {
    double worst = -kInf;
    for (std::size_t i = 0; i < s.cs.size(); ++i)
      worst = std::max(worst, s.cs[i].eval(x) - s.thr[i]);
    if (worst < best_short) {
      best_short = worst;
      best_x = x;
    }
    return worst <= tol;
  };

  std::vector<Vector> axis_values;
  {
    Vector vals;
    vals.push_back(0.0);
    std::size_t steps = n <= 2 ? 40 : (n == 3 ? 20 : 10);
    for (std::size_t k = 1; k <= steps; ++k) vals.push_back(10.0 * k / double(steps));
    if (n <= 3)
      for (int e = -10; e <= 10; ++e) vals.push_back(std::ldexp(1.0, e));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    axis_values.assign(n, vals);
  }
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = axis_values[i][idx[i]];
    if (try_point(x)) {
      *witness = x;
      return true;
    }
    std::size_t d = 0;
    while (d < n && ++idx[d] == axis_values[d].size()) idx[d++] = 0;
    if (d == n) break;
  }

  // Local refinement: shrinking coordinate neighborhoods of the incumbent.
  double step = 0.25;
  for (int round = 0; round < 24; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (int dir = -1; dir <= 1; dir += 2) {
        Vector x = best_x;
        x[i] = std::max(0.0, x[i] * (1.0 + dir * step) + dir * step * 1e-3);
        double prev = best_short;
        if (try_point(x)) {
          *witness = x;
          return true;
        }
        if (best_short < prev) improved = true;
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-10) break;
  }
  return false;
}

// Homogeneous instances: x = sqrt(t) d with d in the unit simplex reduces
// membership to interval reasoning about t >= 0 per sub-simplex.
MembershipQuery membership_homogeneous(const ShiftedSystem& s,
                                       const Vector& target,
                                       const MembershipBudget& budget) {
  MembershipQuery out;
  out.target = target;
  const std::size_t n = s.n;
  const std::size_t nc = s.cs.size();

  struct Node {
    std::vector<Vector> verts;
    int depth = 0;
  };

  auto exact_member_at = [&](const Vector& d, Vector* witness) {
    double Lb = 0.0, Ub = kInf;
    for (std::size_t i = 0; i < nc; ++i) {
      double qv = s.cs[i].A.quad(d);
      double u = s.thr[i];
      if (qv > 1e-13) {
        if (u < 0) return false;
        Ub = std::min(Ub, u / qv);
      } else if (qv < -1e-13) {
        Lb = std::max(Lb, std::max(0.0, u / qv));
      } else if (u < 0) {
        return false;
      }
    }
    if (Lb > Ub) return false;
    double t = std::isfinite(Ub) ? 0.5 * (Lb + std::min(Ub, Lb + 1.0)) : Lb;
    Vector x = scaled(d, std::sqrt(t));
    if (!satisfies(s, x, budget.member_tol)) return false;
    *witness = x;
    return true;
  };

  std::vector<Node> stack;
  {
    Node root;
    for (std::size_t i = 0; i < n; ++i) root.verts.push_back(unit_vector(n, i));
    stack.push_back(std::move(root));
  }
  std::size_t nodes = 0;
  bool exhausted = false;
  while (!stack.empty()) {
    if (++nodes > budget.max_nodes) {
      exhausted = true;
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();

    // Per-constraint range of d^T Q d over the sub-simplex from pairwise
    // vertex values, then the loosest feasible t-interval.
    double Lmax = 0.0, Umin = kInf;
    bool empty = false;
    for (std::size_t i = 0; i < nc && !empty; ++i) {
      double qlo = kInf;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
          qlo = std::min(qlo, s.cs[i].A.bilinear(node.verts[a], node.verts[b]));
      double u = s.thr[i];
      if (qlo > 1e-13) {
        if (u < 0)
          empty = true;
        else
          Umin = std::min(Umin, u / qlo);
      } else if (qlo < -1e-13) {
        if (u < 0) Lmax = std::max(Lmax, u / qlo);
      } else if (u < 0) {
        // qlo could be ~0 but larger values exist; only prune via L/U.
        Lmax = std::max(Lmax, 0.0);
      }
    }
    if (empty || Lmax > Umin) continue;  // pruned

    Vector centroid(n, 0.0);
    for (const auto& v : node.verts)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += v[i] / double(n);
    Vector witness;
    if (exact_member_at(centroid, &witness)) {
      out.verdict = MembershipVerdict::member;
      out.witness = witness;
      return out;
    }
    for (const auto& v : node.verts)
      if (exact_member_at(v, &witness)) {
        out.verdict = MembershipVerdict::member;
        out.witness = witness;
        return out;
      }

    if (node.depth >= budget.max_depth) {
      exhausted = true;
      continue;
    }
    // Longest-edge bisection.
    std::size_t ea = 0, eb = 1;
    double longest = -1.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double diff = node.verts[a][i] - node.verts[b][i];
          d2 += diff * diff;
        }
        if (d2 > longest) {
          longest = d2;
          ea = a;
          eb = b;
        }
      }
    Vector mid(n);
    for (std::size_t i = 0; i < n; ++i)
      mid[i] = 0.5 * (node.verts[ea][i] + node.verts[eb][i]);
    Node left = node, right = node;
    left.verts[ea] = mid;
    right.verts[eb] = mid;
    left.depth = right.depth = node.depth + 1;
    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }
  if (exhausted) {
    out.verdict = MembershipVerdict::undecided;
    out.note = "simplex budget exhausted";
  } else {
    out.verdict = MembershipVerdict::non_member;
    out.note = "all simplex cells carry interval certificates";
  }
  return out;
}

}  // namespace

MembershipQuery membership(const QPInstance& p, const Vector& target,
                           const MembershipBudget& budget) {
  ShiftedSystem s = build_system(p, target);
  MembershipQuery out;
  out.target = target;

  Vector witness;
  if (grid_member_search(s, 1e-12, &witness)) {
    out.verdict = MembershipVerdict::member;
    out.witness = witness;
    return out;
  }

  bool homogeneous = true;
  for (const auto& g : s.cs)
    if (norm_inf(g.b) > 1e-15 || std::fabs(g.c) > 1e-15) homogeneous = false;
  if (homogeneous && p.n >= 2) return membership_homogeneous(s, target, budget);

  // Branch and prune over the orthant with interval certificates.
  const std::size_t n = s.n;
  std::vector<Cell> stack;
  {
    Cell root;
    root.lo.assign(n, 0.0);
    root.hi.assign(n, kInf);
    stack.push_back(std::move(root));
  }
  std::size_t nodes = 0;
  bool exhausted = false;
  while (!stack.empty()) {
    if (++nodes > budget.max_nodes) {
      exhausted = true;
      break;
    }
    Cell cell = std::move(stack.back());
    stack.pop_back();

    // Constraint propagation to a (cheap) fixpoint.
    bool pruned = false;
    for (int round = 0; round < 6 && !pruned; ++round) {
      bool changed = false;
      for (std::size_t i = 0; i < s.cs.size() && !pruned; ++i)
        for (std::size_t j = 0; j < n && !pruned; ++j) {
          ContractOutcome r =
              contract_coord(s.cs[i], s.thr[i], cell.lo, cell.hi, j);
          if (r == ContractOutcome::empty) pruned = true;
          if (r == ContractOutcome::tightened) changed = true;
        }
      if (!changed) break;
    }
    if (!pruned)
      for (std::size_t i = 0; i < s.cs.size(); ++i)
        if (interval_lower(s.cs[i], cell.lo, cell.hi) > s.thr[i]) pruned = true;
    if (pruned) continue;

    // Representative points: propagated corner and midpoint.
    Vector rep(n), mid(n);
    for (std::size_t i = 0; i < n; ++i) {
      rep[i] = cell.lo[i];
      mid[i] = std::isfinite(cell.hi[i]) ? 0.5 * (cell.lo[i] + cell.hi[i])
                                         : cell.lo[i] + 1.0;
    }
    if (satisfies(s, rep, budget.member_tol)) {
      out.verdict = MembershipVerdict::member;
      out.witness = rep;
      return out;
    }
    if (satisfies(s, mid, budget.member_tol)) {
      out.verdict = MembershipVerdict::member;
      out.witness = mid;
      return out;
    }

    if (cell.depth >= budget.max_depth) {
      exhausted = true;
      continue;
    }
    // Split the first unbounded coordinate, else the widest one.
    std::size_t sj = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(cell.hi[i])) {
        sj = i;
        break;
      }
    double split;
    if (sj < n) {
      split = std::max({2.0 * cell.lo[sj], cell.lo[sj] + 1.0, 1.0});
    } else {
      double widest = -1.0;
      for (std::size_t i = 0; i < n; ++i)
        if (cell.hi[i] - cell.lo[i] > widest) {
          widest = cell.hi[i] - cell.lo[i];
          sj = i;
        }
      if (widest < 1e-9) {
        exhausted = true;  // boundary-thin undecided cell
        continue;
      }
      split = 0.5 * (cell.lo[sj] + cell.hi[sj]);
    }
    Cell left = cell, right = cell;
    left.hi[sj] = split;
    right.lo[sj] = split;
    left.depth = right.depth = cell.depth + 1;
    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }

  if (exhausted) {
    out.verdict = MembershipVerdict::undecided;
    out.note = "branch-and-prune budget exhausted";
  } else {
    out.verdict = MembershipVerdict::non_member;
    out.note = "orthant covered by interval violation certificates";
  }
  return out;
}

}  // namespace qpdual
