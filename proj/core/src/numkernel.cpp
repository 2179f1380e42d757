#include "qpdual/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qpdual {

Vector EigenDecomposition::eigenvector(std::size_t k) const {
  Vector v(vectors.rows());
  for (std::size_t i = 0; i < vectors.rows(); ++i) v[i] = vectors(i, k);
  return v;
}

EigenDecomposition sym_eig(const Matrix& A) {
  if (!A.is_square()) throw std::invalid_argument("sym_eig: non-square");
  if (!A.all_finite()) throw std::invalid_argument("sym_eig: non-finite entries");
  const std::size_t n = A.rows();
  Matrix D = A.symmetrized();
  Matrix V = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += D(p, q) * D(p, q);
    return s;
  };

  const double stop = 1e-28 * (1.0 + D.frobenius_norm() * D.frobenius_norm());
  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = D(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (D(q, q) - D(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double dkp = D(k, p), dkq = D(k, q);
          D(k, p) = c * dkp - s * dkq;
          D(k, q) = s * dkp + c * dkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double dpk = D(p, k), dqk = D(q, k);
          D(p, k) = c * dpk - s * dqk;
          D(q, k) = s * dpk + c * dqk;
        }
        D(p, q) = D(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return D(a, a) < D(b, b); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = D(order[k], order[k]);
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += V(i, order[k]) * V(i, order[k]);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = V(i, order[k]) / (nrm > 0 ? nrm : 1.0);
  }
  return out;
}

std::optional<Vector> solve_linear(const Matrix& M, const Vector& rhs) {
  if (!M.is_square() || M.rows() != rhs.size())
    throw std::invalid_argument("solve_linear: dimension mismatch");
  const std::size_t n = M.rows();
  Matrix A = M;
  Vector b = rhs;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  double max_pivot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(A(i, k)) > std::fabs(A(piv, k))) piv = i;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    double p = std::fabs(A(k, k));
    max_pivot = std::max(max_pivot, p);
    if (p <= 1e-12 * std::max(1.0, max_pivot)) return std::nullopt;
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = A(i, k) / A(k, k);
      if (m == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  Vector x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * x[j];
    x[k] = s / A(k, k);
  }
  return x;
}

Vector solve_least_squares(const Matrix& M, const Vector& rhs) {
  // Minimum-norm least squares via eigendecomposition of M^T M.
  Matrix Mt = M.transposed();
  Matrix G = Mt * M;
  Vector g = Mt.mul(rhs);
  EigenDecomposition ed = sym_eig(G);
  double lmax = 0.0;
  for (double l : ed.values) lmax = std::max(lmax, std::fabs(l));
  double cutoff = 1e-12 * std::max(1.0, lmax);
  Vector x(M.cols(), 0.0);
  for (std::size_t k = 0; k < ed.values.size(); ++k) {
    if (std::fabs(ed.values[k]) <= cutoff) continue;
    Vector vk = ed.eigenvector(k);
    double coef = dot(vk, g) / ed.values[k];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += coef * vk[i];
  }
  return x;
}

namespace {

// Full-tableau simplex over min c^T x, Ax = b (b >= 0 after row flips),
// x >= 0, with Bland's anti-cycling rule.
struct Tableau {
  Matrix A;                // rows x cols, kept as B^{-1} A
  Vector b;                // B^{-1} b, stays >= 0
  std::vector<int> basis;  // column index basic in each row
};

// One Bland-rule phase on the given objective. Returns "unbounded" entering
// column index via `unbounded_col` when no ratio limits the step.
enum class PhaseOutcome { optimal, unbounded };

PhaseOutcome run_simplex(Tableau& t, const Vector& cost, int restrict_cols,
                         int* unbounded_col) {
  const std::size_t rows = t.b.size();
  const std::size_t cols = static_cast<std::size_t>(restrict_cols);
  const double tol = 1e-10;
  for (long iter = 0;; ++iter) {
    if (iter > 200000) throw std::runtime_error("simplex iteration runaway");
    // Reduced costs with Bland: first negative wins.
    int enter = -1;
    for (std::size_t j = 0; j < cols; ++j) {
      bool basic = false;
      for (std::size_t i = 0; i < rows; ++i)
        if (t.basis[i] == static_cast<int>(j)) { basic = true; break; }
      if (basic) continue;
      double rc = cost[j];
      for (std::size_t i = 0; i < rows; ++i) rc -= cost[t.basis[i]] * t.A(i, j);
      if (rc < -tol) { enter = static_cast<int>(j); break; }
    }
    if (enter < 0) return PhaseOutcome::optimal;

    int leave_row = -1;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double a = t.A(i, enter);
      if (a > tol) {
        double ratio = t.b[i] / a;
        if (leave_row < 0 || ratio < best_ratio - 1e-14 ||
            (std::fabs(ratio - best_ratio) <= 1e-14 &&
             t.basis[i] < t.basis[leave_row])) {
          leave_row = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
    }
    if (leave_row < 0) {
      if (unbounded_col) *unbounded_col = enter;
      return PhaseOutcome::unbounded;
    }

    double piv = t.A(leave_row, enter);
    for (std::size_t j = 0; j < t.A.cols(); ++j) t.A(leave_row, j) /= piv;
    t.b[leave_row] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (static_cast<int>(i) == leave_row) continue;
      double m = t.A(i, enter);
      if (m == 0.0) continue;
      for (std::size_t j = 0; j < t.A.cols(); ++j)
        t.A(i, j) -= m * t.A(leave_row, j);
      t.b[i] -= m * t.b[leave_row];
      if (t.b[i] < 0 && t.b[i] > -1e-11) t.b[i] = 0;
    }
    t.basis[leave_row] = enter;
  }
}

}  // namespace

namespace {

LPResult lp_solve_raw(const Vector& c, const Matrix& E, const Vector& f,
                      LPSense sense) {
  const std::size_t rows = E.rows();
  const std::size_t nv = E.cols();
  if (c.size() != nv || f.size() != rows)
    throw std::invalid_argument("lp_solve: dimension mismatch");

  Vector obj = c;
  if (sense == LPSense::maximize)
    for (double& v : obj) v = -v;

  // Phase I with artificials.
  Tableau t;
  t.A = Matrix(rows, nv + rows);
  t.b = f;
  for (std::size_t i = 0; i < rows; ++i) {
    double sgn = (f[i] < 0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) t.A(i, j) = sgn * E(i, j);
    t.b[i] = sgn * f[i];
    t.A(i, nv + i) = 1.0;
    t.basis.push_back(static_cast<int>(nv + i));
  }
  Vector phase1_cost(nv + rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) phase1_cost[nv + i] = 1.0;
  run_simplex(t, phase1_cost, static_cast<int>(nv + rows), nullptr);

  double art_sum = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    if (t.basis[i] >= static_cast<int>(nv)) art_sum += t.b[i];
  if (art_sum > 1e-8) {
    LPResult r;
    r.status = LPStatus::infeasible;
    return r;
  }

  // Drive zero-level artificials out; drop redundant rows.
  std::vector<bool> drop(rows, false);
  for (std::size_t i = 0; i < rows; ++i) {
    if (t.basis[i] < static_cast<int>(nv)) continue;
    int j_piv = -1;
    for (std::size_t j = 0; j < nv; ++j)
      if (std::fabs(t.A(i, j)) > 1e-9) { j_piv = static_cast<int>(j); break; }
    if (j_piv < 0) { drop[i] = true; continue; }
    double piv = t.A(i, j_piv);
    for (std::size_t j = 0; j < t.A.cols(); ++j) t.A(i, j) /= piv;
    t.b[i] /= piv;
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == i) continue;
      double m = t.A(k, j_piv);
      if (m == 0.0) continue;
      for (std::size_t j = 0; j < t.A.cols(); ++j) t.A(k, j) -= m * t.A(i, j);
      t.b[k] -= m * t.b[i];
    }
    t.basis[i] = j_piv;
  }
  if (std::any_of(drop.begin(), drop.end(), [](bool d) { return d; })) {
    Tableau t2;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < rows; ++i) keep += drop[i] ? 0 : 1;
    t2.A = Matrix(keep, t.A.cols());
    t2.b.resize(keep);
    std::size_t r = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (drop[i]) continue;
      for (std::size_t j = 0; j < t.A.cols(); ++j) t2.A(r, j) = t.A(i, j);
      t2.b[r] = t.b[i];
      t2.basis.push_back(t.basis[i]);
      ++r;
    }
    t = std::move(t2);
  }

  Vector phase2_cost(nv + rows, 0.0);
  for (std::size_t j = 0; j < nv; ++j) phase2_cost[j] = obj[j];
  int unb_col = -1;
  PhaseOutcome oc = run_simplex(t, phase2_cost, static_cast<int>(nv), &unb_col);

  LPResult r;
  if (oc == PhaseOutcome::unbounded) {
    r.status = LPStatus::unbounded;
    r.ray.assign(nv, 0.0);
    r.ray[unb_col] = 1.0;
    for (std::size_t i = 0; i < t.b.size(); ++i)
      if (t.basis[i] < static_cast<int>(nv)) r.ray[t.basis[i]] = -t.A(i, unb_col);
    for (double& v : r.ray) if (std::fabs(v) < 1e-13) v = 0.0;
    // Also report the feasible base point reached.
    r.point.assign(nv, 0.0);
    for (std::size_t i = 0; i < t.b.size(); ++i)
      if (t.basis[i] < static_cast<int>(nv)) r.point[t.basis[i]] = t.b[i];
    return r;
  }
  r.status = LPStatus::optimal;
  r.point.assign(nv, 0.0);
  for (std::size_t i = 0; i < t.b.size(); ++i)
    if (t.basis[i] < static_cast<int>(nv)) r.point[t.basis[i]] = std::max(0.0, t.b[i]);
  r.value = dot(c, r.point);
  return r;
}

}  // namespace

LPResult lp_solve(const Vector& c, const Matrix& E, const Vector& f,
                  LPSense sense) {
  const std::size_t rows = E.rows();
  const std::size_t nv = E.cols();
  if (c.size() != nv || f.size() != rows)
    throw std::invalid_argument("lp_solve: dimension mismatch");

  // Equilibrate (row max first, then column max, repeated) so the simplex
  // tolerances stay meaningful when cut coefficients span many orders of
  // magnitude. Row scaling only rescales equality rows; column scaling is a
  // positive change of variables x_j = y_j / colscale_j.
  Matrix Es = E;
  Vector fs = f;
  Vector colscale(nv, 1.0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < rows; ++i) {
      double m = 0.0;
      for (std::size_t j = 0; j < nv; ++j) m = std::max(m, std::fabs(Es(i, j)));
      if (m > 0.0) {
        for (std::size_t j = 0; j < nv; ++j) Es(i, j) /= m;
        fs[i] /= m;
      }
    }
    for (std::size_t j = 0; j < nv; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < rows; ++i) m = std::max(m, std::fabs(Es(i, j)));
      if (m > 0.0) {
        for (std::size_t i = 0; i < rows; ++i) Es(i, j) /= m;
        colscale[j] *= m;
      }
    }
  }
  Vector cs(nv);
  for (std::size_t j = 0; j < nv; ++j) cs[j] = c[j] / colscale[j];

  LPResult r = lp_solve_raw(cs, Es, fs, sense);
  if (!r.point.empty())
    for (std::size_t j = 0; j < nv; ++j) r.point[j] /= colscale[j];
  if (!r.ray.empty())
    for (std::size_t j = 0; j < nv; ++j) r.ray[j] /= colscale[j];
  if (r.status == LPStatus::optimal) r.value = dot(c, r.point);
  return r;
}

std::vector<Vector> enumerate_vertices(const Matrix& E, const Vector& f,
                                       double tol) {
  // Row-reduce first so every basis candidate is square and (potentially)
  // nonsingular.
  std::size_t rows = E.rows(), nv = E.cols();
  Matrix A(rows, nv + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < nv; ++j) A(i, j) = E(i, j);
    A(i, nv) = f[i];
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < nv && rank < rows; ++col) {
    std::size_t piv = rank;
    for (std::size_t i = rank + 1; i < rows; ++i)
      if (std::fabs(A(i, col)) > std::fabs(A(piv, col))) piv = i;
    if (std::fabs(A(piv, col)) < 1e-11) continue;
    if (piv != rank)
      for (std::size_t j = 0; j <= nv; ++j) std::swap(A(rank, j), A(piv, j));
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      double m = A(i, col) / A(rank, col);
      if (m == 0.0) continue;
      for (std::size_t j = 0; j <= nv; ++j) A(i, j) -= m * A(rank, j);
    }
    ++rank;
  }
  // Inconsistent system => no vertices.
  for (std::size_t i = rank; i < rows; ++i)
    if (std::fabs(A(i, nv)) > 1e-9) return {};

  Matrix Er(rank, nv);
  Vector fr(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::size_t j = 0; j < nv; ++j) Er(i, j) = A(i, j);
    fr[i] = A(i, nv);
  }
  if (rank == 0) {
    // Feasible set is the whole orthant; only vertex is the origin.
    return {Vector(nv, 0.0)};
  }

  std::vector<Vector> verts;
  std::vector<std::size_t> idx(rank);
  // Enumerate all column subsets of size `rank`.
  std::vector<std::size_t> comb(rank);
  std::iota(comb.begin(), comb.end(), 0);
  auto next_comb = [&]() {
    std::size_t k = rank;
    while (k-- > 0) {
      if (comb[k] + 1 <= nv - (rank - k)) {
        ++comb[k];
        for (std::size_t j = k + 1; j < rank; ++j) comb[j] = comb[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  do {
    Matrix B(rank, rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) B(i, j) = Er(i, comb[j]);
    auto sol = solve_linear(B, fr);
    if (!sol) continue;
    bool ok = true;
    for (double v : *sol)
      if (v < -tol) { ok = false; break; }
    if (!ok) continue;
    Vector x(nv, 0.0);
    for (std::size_t j = 0; j < rank; ++j) x[comb[j]] = std::max(0.0, (*sol)[j]);
    bool dup = false;
    for (const auto& v : verts)
      if (norm_inf(axpy(-1.0, v, x)) < 1e-8) { dup = true; break; }
    if (!dup) verts.push_back(std::move(x));
  } while (next_comb());
  return verts;
}

}  // namespace qpdual
