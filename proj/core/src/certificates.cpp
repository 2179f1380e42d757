#include "qpdual/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpdual/copositivity.hpp"
#include "qpdual/numkernel.hpp"

namespace qpdual {

namespace {

CopositivityVerdict strict_check(const Matrix& Q) {
  CopositivityVerdict v = check_copositive(Q, 1e-9, 40);
  if (v.status == CopositivityStatus::undecided)
    v = check_copositive(Q, 1e-9, 60);
  return v;
}

// Sign-normalize so the largest-magnitude entry is positive, then test
// entrywise nonnegativity (or nonpositivity for `negative`).
bool sign_normalized_in_orthant(Vector& d, bool negative, double tol = 1e-9) {
  double big = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (std::fabs(d[i]) > big) { big = std::fabs(d[i]); arg = i; }
  if (big == 0.0) return false;
  if (d[arg] < 0)
    for (double& v : d) v = -v;
  if (negative)
    for (double& v : d) v = -v;
  for (double v : d)
    if (v < -tol) return false;
  return true;
}

}  // namespace

Certificate check_hqp(const HQPInstance& h) {
  Certificate cert;
  cert.kind = CertificateKind::hqp_strong_convexifiable;
  CopositivityVerdict v = strict_check(h.B);
  switch (v.status) {
    case CopositivityStatus::strictly_copositive:
      cert.verdict = CertificateVerdict::holds;
      cert.evidence.push_back("B strictly copositive, certified min " +
                              std::to_string(v.certified_min));
      break;
    case CopositivityStatus::not_copositive:
      cert.verdict = CertificateVerdict::fails;
      cert.evidence.push_back("B not copositive");
      cert.witness = v.witness;
      break;
    case CopositivityStatus::copositive_not_strict:
      cert.verdict = CertificateVerdict::fails;
      cert.evidence.push_back("B copositive but not strictly (zero on simplex)");
      if (v.has_witness) cert.witness = v.witness;
      break;
    default:
      cert.verdict = CertificateVerdict::undecided;
      cert.evidence.push_back("copositivity of B undecided");
  }
  return cert;
}

Certificate check_uniform(const UniformQPInstance& p) {
  Certificate cert;
  cert.kind = CertificateKind::uniform_strong_convexifiable;
  const std::size_t n = p.n;

  // Premise: some s = gamma + sum alpha_i beta_i with s*A strictly
  // copositive. Positive s is always reachable; negative s needs a
  // negative alpha_i.
  bool neg_reachable = false;
  for (double a : p.alphas)
    if (a < 0) neg_reachable = true;

  CopositivityVerdict pos = strict_check(p.A);
  bool premise = false;
  bool premise_undecided = false;
  if (pos.status == CopositivityStatus::strictly_copositive) {
    premise = true;
    cert.evidence.push_back("premise: s = +1, A strictly copositive");
  } else if (pos.status == CopositivityStatus::undecided) {
    premise_undecided = true;
  }
  if (!premise && neg_reachable) {
    CopositivityVerdict neg = strict_check(p.A * -1.0);
    if (neg.status == CopositivityStatus::strictly_copositive) {
      premise = true;
      premise_undecided = false;
      cert.evidence.push_back("premise: s = -1, -A strictly copositive");
    } else if (neg.status == CopositivityStatus::undecided) {
      premise_undecided = true;
    }
  }
  if (!premise) {
    cert.verdict = premise_undecided ? CertificateVerdict::undecided
                                     : CertificateVerdict::fails;
    cert.evidence.push_back("scalar strict-copositivity premise not established");
    return cert;
  }

  EigenDecomposition ed = sym_eig(p.A);
  double lmin = ed.values.front(), lmax = ed.values.back();

  auto ortho_ok = [&](const Vector& d) {
    for (std::size_t i = 0; i < p.alphas.size(); ++i) {
      Vector w = p.lin[i];
      for (std::size_t j = 0; j < n; ++j) w[j] -= p.alphas[i] * p.b[j];
      if (std::fabs(dot(w, d)) > 1e-8) return false;
    }
    return true;
  };

  // Candidate eigenvectors for a given eigenvalue-sign filter: the basis
  // vectors plus combinations of two basis vectors within a repeated
  // eigenspace.
  auto find_orthant_eigvec = [&](bool want_positive_eval, bool want_negative_eval,
                                 bool orthant_negative, Vector* found) {
    bool deep_space = false;
    std::vector<std::size_t> idxs;
    for (std::size_t k = 0; k < n; ++k) {
      double l = ed.values[k];
      if (std::fabs(l) <= 1e-8) continue;
      if (want_positive_eval && l <= 0) continue;
      if (want_negative_eval && l >= 0) continue;
      idxs.push_back(k);
    }
    for (std::size_t k : idxs) {
      Vector d = ed.eigenvector(k);
      if (sign_normalized_in_orthant(d, orthant_negative) && ortho_ok(
              orthant_negative ? scaled(d, -1.0) : d)) {
        *found = orthant_negative ? scaled(d, -1.0) : d;
        return !deep_space;
      }
    }
    for (std::size_t a = 0; a < idxs.size(); ++a) {
      for (std::size_t b = a + 1; b < idxs.size(); ++b) {
        if (std::fabs(ed.values[idxs[a]] - ed.values[idxs[b]]) > 1e-8) continue;
        std::size_t same = 0;
        for (std::size_t k : idxs)
          if (std::fabs(ed.values[k] - ed.values[idxs[a]]) <= 1e-8) ++same;
        if (same > 2) deep_space = true;
        Vector va = ed.eigenvector(idxs[a]);
        Vector vb = ed.eigenvector(idxs[b]);
        for (int step = 0; step <= 100; ++step) {
          double t = step / 100.0;
          for (int sgn = -1; sgn <= 1; sgn += 2) {
            Vector d(n);
            for (std::size_t i = 0; i < n; ++i)
              d[i] = (1.0 - t) * va[i] + sgn * t * vb[i];
            if (norm2(d) < 1e-12) continue;
            Vector cand = d;
            if (sign_normalized_in_orthant(cand, orthant_negative)) {
              Vector real_d = orthant_negative ? scaled(cand, -1.0) : cand;
              if (ortho_ok(real_d)) { *found = real_d; return true; }
            }
          }
        }
      }
    }
    if (deep_space) return false;
    return false;
  };

  Vector d, dhat;
  bool cond = false;
  if (lmin >= -1e-9) {  // A PSD
    if (find_orthant_eigvec(false, false, false, &d)) {
      cond = true;
      cert.evidence.push_back("condition (i): A PSD with nonnegative eigenvector");
      cert.witness = d;
    }
  }
  if (!cond && lmax <= 1e-9) {  // -A PSD
    if (find_orthant_eigvec(false, false, false, &d)) {
      cond = true;
      cert.evidence.push_back("condition (ii): -A PSD with nonnegative eigenvector");
      cert.witness = d;
    }
  }
  if (!cond) {
    bool has_pos = find_orthant_eigvec(true, false, false, &d);
    bool has_neg = has_pos && find_orthant_eigvec(false, true, true, &dhat);
    if (has_pos && has_neg) {
      cond = true;
      cert.evidence.push_back(
          "condition (iii): orthant eigenvectors for a positive and a negative eigenvalue");
      cert.witness = d;
    }
  }

  // Deeper than two-dimensional eigenspaces are only partially searched.
  std::size_t max_mult = 0;
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t mult = 0;
    for (std::size_t b = 0; b < n; ++b)
      if (std::fabs(ed.values[a] - ed.values[b]) <= 1e-8) ++mult;
    max_mult = std::max(max_mult, mult);
  }
  if (!cond && max_mult > 2)
    cert.evidence.push_back(
        "completeness gap: eigenspace of dimension > 2 searched pairwise only");

  cert.verdict = cond ? CertificateVerdict::holds : CertificateVerdict::fails;
  if (!cond)
    cert.evidence.push_back("none of conditions (i)-(iii) established");
  return cert;
}

Certificate check_RA(const MixedIntegerQP& p) {
  Certificate cert;
  cert.kind = CertificateKind::regularity_RA;
  const std::size_t n = p.n;
  Matrix E(p.m(), n);
  for (std::size_t j = 0; j < p.m(); ++j)
    for (std::size_t i = 0; i < n; ++i) E(j, i) = p.eq_normals[j][i];

  cert.verdict = CertificateVerdict::holds;
  for (std::size_t i = 0; i < p.s; ++i) {
    Vector c(n, 0.0);
    c[i] = 1.0;
    LPResult lp = lp_solve(c, E, p.eq_rhs, LPSense::maximize);
    if (lp.status == LPStatus::infeasible) {
      cert.evidence.push_back("equality system infeasible: (RA) vacuous");
      return cert;
    }
    if (lp.status == LPStatus::unbounded) {
      cert.verdict = CertificateVerdict::fails;
      cert.evidence.push_back("max d_" + std::to_string(i) + " unbounded");
      cert.witness = lp.ray;
      return cert;
    }
    if (lp.value > 1.0 + 1e-9) {
      cert.verdict = CertificateVerdict::fails;
      cert.evidence.push_back("max d_" + std::to_string(i) + " = " +
                              std::to_string(lp.value) + " > 1");
      cert.witness = lp.point;
      return cert;
    }
    cert.evidence.push_back("max d_" + std::to_string(i) + " = " +
                            std::to_string(lp.value) + " <= 1");
  }
  return cert;
}

Certificate check_thm31_cone(const MixedIntegerQP& p) {
  Certificate cert;
  cert.kind = CertificateKind::thm31_cone;
  ConeDescription cone;
  cone.n = p.n;
  cone.normals = p.eq_normals;
  for (std::size_t i = 0; i < p.s; ++i) cone.zeroed.push_back(i);
  CopositivityVerdict v = check_copositive_on_cone(p.objective.A, cone, 1e-9, 40);
  if (v.status == CopositivityStatus::undecided)
    v = check_copositive_on_cone(p.objective.A, cone, 1e-9, 60);
  switch (v.status) {
    case CopositivityStatus::strictly_copositive:
      cert.verdict = CertificateVerdict::holds;
      cert.evidence.push_back(v.trivial_cone
                                  ? "trivial cone"
                                  : "A strictly copositive on the recession cone");
      break;
    case CopositivityStatus::undecided:
      cert.verdict = CertificateVerdict::undecided;
      break;
    default:
      cert.verdict = CertificateVerdict::fails;
      cert.evidence.push_back("nonzero recession direction with d^T A d <= 0");
      if (v.has_witness) cert.witness = v.witness;
  }
  return cert;
}

Certificate check_thm41_cone(const RobustMIQP& p) {
  Certificate cert;
  cert.kind = CertificateKind::thm41_cone;
  const std::size_t n = p.n;
  // {d >= 0, a_j^T d = 0, d_i = 0 (i < s)} = {0}, via max e^T d with the
  // slice e^T d <= 1.
  const std::size_t rows = p.m() + p.s + 1;
  Matrix E(rows, n + 1);
  Vector f(rows, 0.0);
  std::size_t r = 0;
  for (const auto& a : p.eq_normals) {
    for (std::size_t j = 0; j < n; ++j) E(r, j) = a[j];
    ++r;
  }
  for (std::size_t i = 0; i < p.s; ++i) E(r++, i) = 1.0;
  for (std::size_t j = 0; j < n; ++j) E(r, j) = 1.0;
  E(r, n) = 1.0;
  f[r] = 1.0;
  Vector c(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) c[j] = 1.0;
  LPResult lp = lp_solve(c, E, f, LPSense::maximize);
  if (lp.status == LPStatus::optimal && lp.value <= 1e-9) {
    cert.verdict = CertificateVerdict::holds;
    cert.evidence.push_back("recession cone is {0}: feasible set compact");
  } else {
    cert.verdict = CertificateVerdict::fails;
    cert.evidence.push_back("nonzero recession direction exists");
    if (lp.status == LPStatus::optimal) cert.witness = lp.point;
  }
  return cert;
}

ConvexifiabilitySample sample_convexifiability(const QPInstance& p,
                                               const SampleBudget& budget) {
  if (p.constraint_count() + 1 > 3)
    throw std::invalid_argument(
        "sample_convexifiability: image dimension exceeds 3");
  ConvexifiabilitySample out;
  const std::size_t n = p.n;
  const std::size_t mm = p.constraint_count();

  // Sample the image set over [0, R]^n.
  std::size_t per_dim = budget.points_per_dim;
  if (n >= 2) per_dim = std::min<std::size_t>(per_dim, 64);
  if (n >= 3) per_dim = std::min<std::size_t>(per_dim, 24);
  std::vector<Vector> gvals;
  Vector fvals;
  double mem_min = 0.0;
  bool mem_found = false;
  std::vector<std::size_t> counter(n, 0);
  for (;;) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = budget.box_radius * counter[i] / double(per_dim - 1);
    Vector g(mm);
    bool feas = true;
    for (std::size_t i = 0; i < mm; ++i) {
      g[i] = p.constraints[i].eval(x);
      if (g[i] > 1e-9) feas = false;
    }
    double f = p.objective.eval(x);
    gvals.push_back(g);
    fvals.push_back(f);
    if (feas && (!mem_found || f < mem_min)) {
      mem_min = f;
      mem_found = true;
    }
    std::size_t d = 0;
    while (d < n && ++counter[d] == per_dim) counter[d++] = 0;
    if (d == n) break;
  }

  if (!mem_found) {
    out.diagnosis = ConvexifiabilityDiagnosis::inconclusive;
    out.note = "no feasible sample point within the box";
    return out;
  }

  // Hull axis slice via an LP over convex combinations of the samples:
  // min sum lambda_k f_k  s.t.  sum lambda_k g_k,i <= 0, sum lambda = 1.
  std::size_t K = fvals.size();
  std::size_t stride = std::max<std::size_t>(1, K / 3000);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < K; k += stride) keep.push_back(k);
  const std::size_t kc = keep.size();
  Matrix E(mm + 1, kc + mm);
  Vector f(mm + 1, 0.0);
  Vector c(kc + mm, 0.0);
  for (std::size_t k = 0; k < kc; ++k) {
    for (std::size_t i = 0; i < mm; ++i) E(i, k) = gvals[keep[k]][i];
    E(mm, k) = 1.0;
    c[k] = fvals[keep[k]];
  }
  for (std::size_t i = 0; i < mm; ++i) E(i, kc + i) = 1.0;  // slack
  f[mm] = 1.0;
  LPResult lp = lp_solve(c, E, f, LPSense::minimize);
  if (lp.status != LPStatus::optimal) {
    out.diagnosis = ConvexifiabilityDiagnosis::inconclusive;
    out.note = "hull slice LP not solvable";
    return out;
  }

  out.hull_slice_min = lp.value;
  out.membership_slice_min = mem_min;
  double margin = 1e-2 * (1.0 + std::fabs(mem_min));
  if (lp.value < mem_min - margin) {
    out.diagnosis = ConvexifiabilityDiagnosis::counterexample_found;
    out.note = "hull axis slice reaches below the membership slice";
  } else {
    out.diagnosis = ConvexifiabilityDiagnosis::consistent_with_convexifiable;
    out.note = "hull and membership slices agree within sampling margin";
  }
  return out;
}

}  // namespace qpdual
