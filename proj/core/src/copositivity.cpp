#include "qpdual/copositivity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "qpdual/numkernel.hpp"

namespace qpdual {

namespace {

struct Node {
  std::vector<Vector> verts;  // n points of the unit simplex
  int depth = 0;
  long index = 0;  // creation order, deterministic tie-breaking
};

double pair_lower_bound(const Matrix& Q, const std::vector<Vector>& v) {
  double lb = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) {
      double val = Q.bilinear(v[i], v[j]);
      if (first || val < lb) { lb = val; first = false; }
    }
  return lb;
}

}  // namespace

SimplexMinimum min_quadratic_form_on_simplex(const Matrix& Q) {
  const std::size_t n = Q.rows();
  if (n > 20) throw std::invalid_argument("simplex face enumeration too large");
  SimplexMinimum best;
  bool have = false;
  // Every face of the simplex is indexed by its support set.
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sup.push_back(i);
    const std::size_t k = sup.size();
    Vector cand;
    if (k == 1) {
      cand = unit_vector(n, sup[0]);
    } else {
      // Stationarity of lam^T Q' lam on {sum lam = 1}:
      // [2 Q'  1; 1^T 0] [lam; nu] = [0; 1].
      Matrix K(k + 1, k + 1);
      Vector rhs(k + 1, 0.0);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) K(a, b) = 2.0 * Q(sup[a], sup[b]);
        K(a, k) = 1.0;
        K(k, a) = 1.0;
      }
      rhs[k] = 1.0;
      auto sol = solve_linear(K, rhs);
      Vector lam;
      if (sol) {
        lam.assign(sol->begin(), sol->begin() + k);
      } else {
        Vector ls = solve_least_squares(K, rhs);
        lam.assign(ls.begin(), ls.begin() + k);
        double sum = 0.0;
        for (double l : lam) sum += l;
        if (std::fabs(sum - 1.0) > 1e-7) continue;
      }
      bool ok = true;
      for (double l : lam)
        if (l < -1e-12) { ok = false; break; }
      if (!ok) continue;
      cand.assign(n, 0.0);
      double sum = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        cand[sup[a]] = std::max(0.0, lam[a]);
        sum += cand[sup[a]];
      }
      if (sum <= 0) continue;
      for (double& c : cand) c /= sum;
    }
    double val = Q.quad(cand);
    if (!have || val < best.value) {
      best.value = val;
      best.argmin = cand;
      have = true;
    }
  }
  return best;
}

CopositivityVerdict check_copositive(const Matrix& Q, double eps,
                                     int max_depth) {
  if (!Q.is_square() || !Q.is_symmetric(1e-12))
    throw std::invalid_argument("check_copositive: non-symmetric input");
  const std::size_t n = Q.rows();
  CopositivityVerdict out;
  if (n == 0) {
    out.status = CopositivityStatus::strictly_copositive;
    out.trivial_cone = true;
    return out;
  }
  if (n == 1) {
    // The simplex is a single point; classify directly.
    const double val = Q(0, 0);
    out.certified_min = val;
    if (val < -eps) {
      out.status = CopositivityStatus::not_copositive;
      out.witness = {1.0};
      out.has_witness = true;
    } else if (val > eps) {
      out.status = CopositivityStatus::strictly_copositive;
    } else {
      out.status = CopositivityStatus::copositive_not_strict;
      out.witness = {1.0};
      out.has_witness = true;
      out.near_zero_dirs.push_back({1.0});
    }
    return out;
  }

  if (n <= 10) {
    // Face enumeration is exact for a quadratic over the simplex (the
    // minimum on each compact face is a vertex or an interior stationary
    // point) and far cheaper than bisection near the zero band.
    SimplexMinimum sm = min_quadratic_form_on_simplex(Q);
    out.certified_min = sm.value;
    if (sm.value < -eps) {
      out.status = CopositivityStatus::not_copositive;
      out.witness = sm.argmin;
      out.has_witness = true;
    } else if (sm.value > eps) {
      out.status = CopositivityStatus::strictly_copositive;
    } else {
      out.status = CopositivityStatus::copositive_not_strict;
      out.witness = sm.argmin;
      out.has_witness = true;
      out.near_zero_dirs.push_back(sm.argmin);
    }
    return out;
  }

  std::deque<Node> queue;
  Node root;
  for (std::size_t i = 0; i < n; ++i) root.verts.push_back(unit_vector(n, i));
  queue.push_back(root);
  long next_index = 1;

  double best_point_val = 0.0;
  Vector best_point;
  bool have_point = false;
  auto consider_point = [&](const Vector& p, double val) {
    if (!have_point || val < best_point_val) {
      best_point_val = val;
      best_point = p;
      have_point = true;
    }
    if (std::fabs(val) <= eps && out.near_zero_dirs.size() < 16) {
      bool dup = false;
      for (const auto& d : out.near_zero_dirs)
        if (norm_inf(axpy(-1.0, d, p)) < 1e-9) { dup = true; break; }
      if (!dup) out.near_zero_dirs.push_back(p);
    }
  };

  double pruned_lb_min = 0.0;
  bool have_pruned = false;
  bool depth_exhausted = false;
  long nodes = 0;
  const long node_cap = 200000;

  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    if (++nodes > node_cap) { depth_exhausted = true; break; }

    double ub = 0.0;
    std::size_t ub_idx = 0;
    for (std::size_t i = 0; i < node.verts.size(); ++i) {
      double val = Q.quad(node.verts[i]);
      consider_point(node.verts[i], val);
      if (i == 0 || val < ub) { ub = val; ub_idx = i; }
    }
    if (ub < -eps) {
      out.status = CopositivityStatus::not_copositive;
      out.witness = node.verts[ub_idx];
      out.has_witness = true;
      out.certified_min = ub;
      return out;
    }
    double lb = pair_lower_bound(Q, node.verts);
    if (lb > eps) {
      pruned_lb_min = have_pruned ? std::min(pruned_lb_min, lb) : lb;
      have_pruned = true;
      continue;
    }
    if (node.depth >= max_depth) { depth_exhausted = true; continue; }

    // Bisect the longest edge.
    std::size_t bi = 0, bj = 1;
    double best_len = -1.0;
    for (std::size_t i = 0; i < node.verts.size(); ++i)
      for (std::size_t j = i + 1; j < node.verts.size(); ++j) {
        double len = norm2(axpy(-1.0, node.verts[i], node.verts[j]));
        if (len > best_len) { best_len = len; bi = i; bj = j; }
      }
    Vector mid(n);
    for (std::size_t k = 0; k < n; ++k)
      mid[k] = 0.5 * (node.verts[bi][k] + node.verts[bj][k]);
    Node a = node, b = node;
    a.verts[bj] = mid;
    b.verts[bi] = mid;
    a.depth = b.depth = node.depth + 1;
    a.index = next_index++;
    b.index = next_index++;
    queue.push_back(std::move(a));
    queue.push_back(std::move(b));
  }

  if (!depth_exhausted) {
    // Every node was pruned with a positive lower bound.
    out.status = CopositivityStatus::strictly_copositive;
    out.certified_min = have_pruned ? pruned_lb_min : 0.0;
    return out;
  }

  // Bounds still straddle the zero band: fall back to the exact simplex
  // minimum when the dimension admits face enumeration.
  if (n <= 20) {
    SimplexMinimum sm = min_quadratic_form_on_simplex(Q);
    out.certified_min = sm.value - 1e-12;
    consider_point(sm.argmin, sm.value);
    if (sm.value < -eps) {
      out.status = CopositivityStatus::not_copositive;
      out.witness = sm.argmin;
      out.has_witness = true;
    } else if (sm.value > eps) {
      out.status = CopositivityStatus::strictly_copositive;
    } else {
      out.status = CopositivityStatus::copositive_not_strict;
      out.witness = sm.argmin;
      out.has_witness = true;
    }
    return out;
  }

  out.status = CopositivityStatus::undecided;
  out.certified_min = have_point ? std::min(0.0, best_point_val) : 0.0;
  if (have_point) {
    out.witness = best_point;
    out.has_witness = true;
  }
  return out;
}

CopositivityVerdict check_copositive_on_cone(const Matrix& Q,
                                             const ConeDescription& cone,
                                             double eps, int max_depth) {
  if (!Q.is_square() || Q.rows() != cone.n)
    throw std::invalid_argument("check_copositive_on_cone: dimension mismatch");
  const std::size_t n = cone.n;

  // Intersect the cone with the unit simplex {sum d = 1, d >= 0}.
  const std::size_t rows = cone.normals.size() + cone.zeroed.size() + 1;
  Matrix E(rows, n);
  Vector f(rows, 0.0);
  std::size_t r = 0;
  for (const auto& a : cone.normals) {
    for (std::size_t j = 0; j < n; ++j) E(r, j) = a[j];
    ++r;
  }
  for (std::size_t i : cone.zeroed) E(r++, i) = 1.0;
  for (std::size_t j = 0; j < n; ++j) E(r, j) = 1.0;
  f[rows - 1] = 1.0;

  std::vector<Vector> verts = enumerate_vertices(E, f);
  CopositivityVerdict out;
  if (verts.empty()) {
    out.status = CopositivityStatus::strictly_copositive;
    out.trivial_cone = true;
    out.certified_min = 0.0;
    return out;
  }

  const std::size_t k = verts.size();
  Matrix Qr(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) Qr(i, j) = Q.bilinear(verts[i], verts[j]);
  Qr = Qr.symmetrized();

  CopositivityVerdict inner = check_copositive(Qr, eps, max_depth);
  out.status = inner.status;
  out.certified_min = inner.certified_min;
  auto map_back = [&](const Vector& lam) {
    Vector x(n, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) x[j] += lam[i] * verts[i][j];
    return x;
  };
  if (inner.has_witness) {
    out.witness = map_back(inner.witness);
    out.has_witness = true;
  }
  for (const auto& d : inner.near_zero_dirs)
    out.near_zero_dirs.push_back(map_back(d));
  return out;
}

}  // namespace qpdual
