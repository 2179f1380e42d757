#include "qpdual/semilag_dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpdual/numkernel.hpp"

namespace qpdual {

QuadraticForm lagrangian_form(const QPInstance& p, const Vector& u) {
  if (u.size() != p.constraint_count())
    throw std::invalid_argument("lagrangian_form: multiplier dimension mismatch");
  QuadraticForm L = p.objective;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const QuadraticForm& g = p.constraints[i];
    L.A += g.A * u[i];
    for (std::size_t j = 0; j < p.n; ++j) L.b[j] += u[i] * g.b[j];
    L.c += u[i] * g.c;
  }
  return L;
}

ThetaResult eval_theta(const QPInstance& p, const Vector& u, std::size_t n_max) {
  for (double v : u)
    if (v < 0) throw std::invalid_argument("eval_theta: negative multiplier");
  QuadraticForm L = lagrangian_form(p, u);
  return min_quadratic_orthant(L.A, L.b, L.c, n_max);
}

namespace {

struct OptimalityCut {
  double theta;
  Vector grad;   // g_i(x*(u)), the exact supergradient
  Vector at_u;
};

struct FeasibilityCut {
  Vector coef;   // d^T A_i d per multiplier
  double rhs;    // -d^T A d; the ray margin is added at model-build time
};

// Model LP: max t over the cut polyhedron intersected with [0, u_cap]^k.
struct ModelSolution {
  bool feasible = false;
  bool have_value = false;  // false when no optimality cuts bound t
  double value = 0.0;
  Vector u;
};

// `hi` empty means no upper bounds; `lo` entries above zero add lower-bound
// rows (the orthant already enforces u >= 0).
ModelSolution solve_model_once(const std::vector<OptimalityCut>& ocuts,
                               const std::vector<FeasibilityCut>& fcuts,
                               std::size_t k, const Vector& lo, const Vector& hi,
                               double eps_ray) {
  // Columns: t+, t-, u (k), one slack per cut, one slack per bound row.
  std::size_t n_box = hi.size();
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > 0.0) ++n_box;
  const std::size_t nv = 2 + k + ocuts.size() + fcuts.size() + n_box;
  const std::size_t rows = ocuts.size() + fcuts.size() + n_box;
  Matrix E(rows, nv);
  Vector f(rows, 0.0);
  Vector c(nv, 0.0);
  std::size_t row = 0, slack = 2 + k;
  for (const auto& cut : ocuts) {
    E(row, 0) = 1.0;
    E(row, 1) = -1.0;
    for (std::size_t i = 0; i < k; ++i) E(row, 2 + i) = -cut.grad[i];
    E(row, slack++) = 1.0;
    f[row] = cut.theta - dot(cut.grad, cut.at_u);
    ++row;
  }
  for (const auto& cut : fcuts) {
    for (std::size_t i = 0; i < k; ++i) E(row, 2 + i) = cut.coef[i];
    E(row, slack++) = -1.0;
    f[row] = cut.rhs + eps_ray;
    ++row;
  }
  for (std::size_t i = 0; i < hi.size(); ++i) {
    E(row, 2 + i) = 1.0;
    E(row, slack++) = 1.0;
    f[row] = hi[i];
    ++row;
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] <= 0.0) continue;
    E(row, 2 + i) = 1.0;
    E(row, slack++) = -1.0;
    f[row] = lo[i];
    ++row;
  }
  ModelSolution out;
  if (!ocuts.empty()) {
    c[0] = 1.0;
    c[1] = -1.0;
  }
  LPResult lp = lp_solve(c, E, f, LPSense::maximize);
  if (lp.status == LPStatus::infeasible) return out;
  out.feasible = true;
  const Vector& pt = lp.point;
  out.u.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) out.u[i] = std::max(0.0, pt[2 + i]);
  if (!ocuts.empty() && lp.status == LPStatus::optimal) {
    out.have_value = true;
    out.value = pt[0] - pt[1];
  }
  return out;
}

// Cuts from spiky regions carry slopes orders of magnitude above the rest of
// the model and wreck the simplex conditioning when they all sit in one LP.
// Solve lazily instead: start from the moderately sloped cuts and pull in a
// steep cut only when the candidate optimum violates it. Every returned
// optimum satisfies the full cut set, so the model stays exact.
ModelSolution solve_model(const std::vector<OptimalityCut>& ocuts,
                          const std::vector<FeasibilityCut>& fcuts,
                          std::size_t k, const Vector& lo, const Vector& hi,
                          double eps_ray) {
  double theta_max = 0.0;
  for (const auto& cut : ocuts) theta_max = std::max(theta_max, cut.theta);
  const double steep = 1e6 * std::max(1.0, std::fabs(theta_max));
  std::vector<OptimalityCut> active;
  std::vector<const OptimalityCut*> rest;
  for (const auto& cut : ocuts) {
    if (norm_inf(cut.grad) <= steep && std::fabs(cut.theta) <= 100.0 * steep)
      active.push_back(cut);
    else
      rest.push_back(&cut);
  }
  if (active.empty() && !ocuts.empty()) {
    // Keep t bounded: seed with the cut of largest theta.
    const OptimalityCut* top = &ocuts.front();
    for (const auto& cut : ocuts)
      if (cut.theta > top->theta) top = &cut;
    active.push_back(*top);
    std::erase(rest, top);
  }
  for (int round = 0;; ++round) {
    ModelSolution ms = solve_model_once(active, fcuts, k, lo, hi, eps_ray);
    if (!ms.feasible && active.size() > 1 && round < 80) {
      // The feasibility-cut system always admits the incumbent, so an
      // infeasible verdict here is numerical; shed the steepest cut for good
      // (loosening the model keeps its bound valid) and try again.
      auto worst_it = active.begin();
      double worst_norm = -1.0;
      for (auto it = active.begin(); it != active.end(); ++it) {
        double nrm = std::max(norm_inf(it->grad), std::fabs(it->theta));
        if (nrm > worst_norm) { worst_norm = nrm; worst_it = it; }
      }
      active.erase(worst_it);
      continue;
    }
    if (!ms.feasible || !ms.have_value || rest.empty() || round >= 80) return ms;
    // Most violated steep cut at the candidate optimum, if any.
    const OptimalityCut* worst = nullptr;
    double worst_gap = -1e-7 * std::max(1.0, std::fabs(ms.value));
    for (const OptimalityCut* cut : rest) {
      double lin = cut->theta;
      for (std::size_t i = 0; i < k; ++i)
        lin += cut->grad[i] * (ms.u[i] - cut->at_u[i]);
      double gap = lin - ms.value;
      if (gap < worst_gap) { worst_gap = gap; worst = cut; }
    }
    if (!worst) return ms;
    active.push_back(*worst);
    std::erase(rest, worst);
  }
}

std::vector<Vector> coarse_grid(std::size_t k) {
  const double levels[3] = {0.0, 1.0, 10.0};
  std::vector<Vector> pts;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k && total <= 243; ++i) total *= 3;
  total = std::min<std::size_t>(total, 243);
  for (std::size_t code = 0; code < total; ++code) {
    Vector u(k, 0.0);
    std::size_t c = code;
    for (std::size_t i = 0; i < k; ++i) {
      u[i] = levels[c % 3];
      c /= 3;
    }
    pts.push_back(std::move(u));
  }
  return pts;
}

}  // namespace

DualResult maximize_dual(const QPInstance& p, const DualOptions& opts) {
  const std::size_t k = p.constraint_count();
  DualResult out;

  if (k == 0) {
    // Theta is constant in u.
    ThetaResult t = eval_theta(p, {}, opts.n_max);
    out.history.push_back({{}, t});
    out.best_u = {};
    if (t.attained()) {
      out.best_value = t.value;
      out.unbounded = false;
      out.termination = DualTermination::converged;
    } else if (t.minus_inf()) {
      out.unbounded = true;
      out.termination = DualTermination::dual_unbounded_below_everywhere;
    } else {
      out.unbounded = true;
      out.termination = DualTermination::undecided_inner;
    }
    return out;
  }

  std::vector<OptimalityCut> ocuts;
  std::vector<FeasibilityCut> fcuts;
  double u_cap = opts.u_cap;
  bool have_best = false;
  std::size_t undecided_count = 0;

  double last_theta = 0.0;
  auto process = [&](const Vector& u) -> ThetaStatus {
    ThetaResult t = eval_theta(p, u, opts.n_max);
    if (t.attained()) {
      last_theta = t.value;
      Vector grad(k);
      for (std::size_t i = 0; i < k; ++i)
        grad[i] = p.constraints[i].eval(t.minimizer);
      ocuts.push_back({t.value, grad, u});
      if (!have_best || t.value > out.best_value) {
        out.best_value = t.value;
        out.best_u = u;
        have_best = true;
        out.history.push_back({u, t});
      }
    } else if (t.minus_inf()) {
      const Vector& d = t.unbounded_ray;
      Vector coef(k);
      for (std::size_t i = 0; i < k; ++i) coef[i] = p.constraints[i].A.quad(d);
      fcuts.push_back({coef, -p.objective.A.quad(d)});
    } else {
      ++undecided_count;
    }
    return t.status;
  };

  // Seed probes: the origin, then the coarse grid until an attained value
  // (or a proof that the cut system is empty) shows up.
  process(Vector(k, 0.0));
  if (ocuts.empty()) {
    for (const auto& u : coarse_grid(k)) {
      if (!ocuts.empty()) break;
      if (norm_inf(u) == 0.0) continue;  // already probed
      process(u);
    }
  }
  int extra_probes = 0;
  while (ocuts.empty() && extra_probes < 50) {
    // Ask the accumulated feasibility cuts for a surviving point.
    ModelSolution ms =
        solve_model({}, fcuts, k, Vector(k, 0.0), Vector(k, u_cap), opts.eps_ray);
    if (!ms.feasible) {
      ModelSolution unboxed =
          solve_model({}, fcuts, k, Vector(k, 0.0), {}, opts.eps_ray);
      if (!unboxed.feasible) {
        out.unbounded = true;
        out.termination = DualTermination::dual_unbounded_below_everywhere;
        return out;
      }
      if (u_cap < opts.u_cap_max) { u_cap *= 2.0; ++extra_probes; continue; }
      out.unbounded = true;
      out.termination = DualTermination::dual_unbounded_below_everywhere;
      return out;
    }
    std::size_t before = fcuts.size();
    ThetaStatus st = process(ms.u);
    ++extra_probes;
    if (st == ThetaStatus::minus_infinity && fcuts.size() == before) break;
    if (st == ThetaStatus::undecided) break;
  }
  if (ocuts.empty()) {
    out.unbounded = true;
    out.termination = (undecided_count > 0)
                          ? DualTermination::undecided_inner
                          : DualTermination::dual_unbounded_below_everywhere;
    return out;
  }

  // Bundle compression: dropping cuts only loosens the model, so the bound
  // stays valid. The newest cuts must survive unconditionally (they are the
  // ones that refute the latest proposal; scoring them at the incumbent
  // would discard them and let the model re-propose the same point forever);
  // the remaining slots go to the cuts tightest at the incumbent.
  auto compress = [&]() {
    const std::size_t cap = 120, keep_newest = 40;
    if (ocuts.size() > cap) {
      std::vector<std::pair<double, std::size_t>> slack;
      for (std::size_t j = 0; j + keep_newest < ocuts.size(); ++j) {
        double lin = ocuts[j].theta;
        for (std::size_t i = 0; i < k; ++i)
          lin += ocuts[j].grad[i] * (out.best_u[i] - ocuts[j].at_u[i]);
        slack.push_back({lin, j});
      }
      std::sort(slack.begin(), slack.end());
      std::vector<OptimalityCut> kept;
      for (std::size_t r = 0; r + keep_newest < cap; ++r)
        kept.push_back(std::move(ocuts[slack[r].second]));
      for (std::size_t j = ocuts.size() - keep_newest; j < ocuts.size(); ++j)
        kept.push_back(std::move(ocuts[j]));
      ocuts = std::move(kept);
    }
    if (fcuts.size() > cap) {
      std::vector<std::pair<double, std::size_t>> margin;
      for (std::size_t j = 0; j + keep_newest < fcuts.size(); ++j)
        margin.push_back({dot(fcuts[j].coef, out.best_u) - fcuts[j].rhs, j});
      std::sort(margin.begin(), margin.end());
      std::vector<FeasibilityCut> kept;
      for (std::size_t r = 0; r + keep_newest < cap; ++r)
        kept.push_back(std::move(fcuts[margin[r].second]));
      for (std::size_t j = fcuts.size() - keep_newest; j < fcuts.size(); ++j)
        kept.push_back(std::move(fcuts[j]));
      fcuts = std::move(kept);
    }
  };

  Vector last_u;
  double eps_ray = opts.eps_ray;
  // Trust region around the incumbent keeps proposals out of the far corners
  // of the u-box, where the inner minimizers (and hence the cuts) explode.
  double trust = 8.0;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    compress();
    Vector lo(k, 0.0), hi(k, u_cap);
    bool trust_active = false;
    for (std::size_t i = 0; i < k; ++i) {
      double center = have_best ? out.best_u[i] : 0.0;
      lo[i] = std::max(0.0, center - trust);
      hi[i] = std::min(u_cap, center + trust);
      if (lo[i] > 0.0 || hi[i] < u_cap) trust_active = true;
    }
    ModelSolution ms = solve_model(ocuts, fcuts, k, lo, hi, eps_ray);
    if (trust_active && (!ms.feasible || !ms.have_value ||
                         (have_best && ms.value - out.best_value <= opts.tol_dual))) {
      // Nothing more inside the trust box; widen it only if the full box
      // still promises progress.
      ModelSolution full =
          solve_model(ocuts, fcuts, k, Vector(k, 0.0), Vector(k, u_cap), eps_ray);
      if (full.feasible && full.have_value &&
          (!have_best || full.value - out.best_value > opts.tol_dual)) {
        trust *= 4.0;
        continue;
      }
      ms = full;  // fall through to the full-box convergence logic
    }
    if (!ms.feasible || !ms.have_value) {
      out.unbounded = !have_best;
      out.termination = DualTermination::converged;
      return out;
    }
    if (have_best && ms.value - out.best_value <= opts.tol_dual) {
      // Converged inside the current box; only then is growing the box
      // worthwhile (the model optimum may sit on the artificial boundary).
      bool at_boundary = false;
      for (double v : ms.u)
        if (v >= u_cap * (1.0 - 1e-9)) at_boundary = true;
      if (!at_boundary && u_cap < opts.u_cap_max) {
        // The boxed argmax may be interior while more value hides beyond the
        // box; trust the box only if the unboxed model agrees.
        ModelSolution open =
            solve_model(ocuts, fcuts, k, Vector(k, 0.0), {}, eps_ray);
        if (open.feasible &&
            (!open.have_value || open.value - out.best_value > opts.tol_dual))
          at_boundary = true;
      }
      if (at_boundary && u_cap < opts.u_cap_max) {
        u_cap *= 2.0;
        continue;
      }
      // The ray margin itself may hide the supremum when it sits exactly on
      // the copositivity boundary (zero curvature along the witness ray is
      // still a finite-Theta point); drop the margin before declaring done.
      if (eps_ray > 0.0) {
        ModelSolution tight =
            solve_model(ocuts, fcuts, k, Vector(k, 0.0), Vector(k, u_cap), 0.0);
        if (tight.feasible && tight.have_value &&
            tight.value - out.best_value > opts.tol_dual) {
          eps_ray = 0.0;
          continue;
        }
      }
      out.termination = DualTermination::converged;
      return out;
    }
    if (!last_u.empty() && norm_inf(axpy(-1.0, last_u, ms.u)) < 1e-12) {
      // The proposal did not move (its cut was dropped or degenerate).
      // Tighten the trust box so the next proposal lands closer to the
      // incumbent; only give up once the box cannot shrink further.
      if (trust > 1e-3) {
        trust *= 0.25;
        last_u.clear();
        continue;
      }
      out.termination = DualTermination::iteration_cap;
      return out;
    }
    last_u = ms.u;
    double prev_best = out.best_value;
    ThetaStatus st = process(ms.u);
    if (st == ThetaStatus::attained && out.best_value > prev_best) {
      // Serious step: expand the trust box when the improving point sat on it.
      for (std::size_t i = 0; i < k; ++i)
        if (ms.u[i] >= hi[i] * (1.0 - 1e-9) ||
            (lo[i] > 0.0 && ms.u[i] <= lo[i] * (1.0 + 1e-9))) {
          trust *= 2.0;
          break;
        }
    } else if (st == ThetaStatus::attained && have_best) {
      // Null step far below the incumbent: a single cut at the proposal only
      // shaves its immediate neighborhood, so also cut at geometrically
      // shrinking points along the segment back to the incumbent.
      double bad = out.best_value - 10.0 * std::max(1.0, std::fabs(out.best_value));
      double lambda = 0.5;
      Vector probe(k);
      for (int scale = 0; scale < 12 && last_theta < bad; ++scale) {
        for (std::size_t i = 0; i < k; ++i)
          probe[i] = out.best_u[i] + lambda * (ms.u[i] - out.best_u[i]);
        if (process(probe) != ThetaStatus::attained) break;
        lambda *= 0.5;
      }
    }
    if (st == ThetaStatus::minus_infinity && have_best) {
      // Feasibility restoration: the domain of Theta is convex (Q(u) must
      // stay copositive), so bisect back toward the incumbent and cut at a
      // finite point near the domain boundary instead of only shaving the
      // infeasible side.
      double lo = 0.0, hi = 1.0;
      Vector probe(k);
      for (int step = 0; step < 10; ++step) {
        double mid = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < k; ++i)
          probe[i] = out.best_u[i] + mid * (ms.u[i] - out.best_u[i]);
        ThetaResult tm = eval_theta(p, probe, opts.n_max);
        if (tm.attained()) lo = mid; else hi = mid;
      }
      if (lo > 0.0) {
        for (std::size_t i = 0; i < k; ++i)
          probe[i] = out.best_u[i] + lo * (ms.u[i] - out.best_u[i]);
        process(probe);
      }
    }
    if (st == ThetaStatus::undecided && have_best) {
      // No cut is available at the proposal; pull back toward the incumbent
      // for an attained cut, then tighten the trust box so the next proposal
      // cannot return to the same point. Give up only when the box is gone.
      double lo_f = 0.0, hi_f = 1.0;
      Vector probe(k);
      for (int step = 0; step < 10; ++step) {
        double mid = 0.5 * (lo_f + hi_f);
        for (std::size_t i = 0; i < k; ++i)
          probe[i] = out.best_u[i] + mid * (ms.u[i] - out.best_u[i]);
        ThetaResult tm = eval_theta(p, probe, opts.n_max);
        if (tm.attained()) lo_f = mid; else hi_f = mid;
      }
      if (lo_f > 0.0) {
        for (std::size_t i = 0; i < k; ++i)
          probe[i] = out.best_u[i] + lo_f * (ms.u[i] - out.best_u[i]);
        process(probe);
      }
      if (trust > 1e-3) {
        trust *= 0.25;
        last_u.clear();
        continue;
      }
      out.termination = DualTermination::undecided_inner;
      return out;
    }
    if (st == ThetaStatus::undecided && !have_best) {
      out.termination = DualTermination::undecided_inner;
      out.unbounded = true;
      return out;
    }
  }
  out.termination = DualTermination::iteration_cap;
  return out;
}

GapReport gap_report(const QPInstance& /*p*/, const PrimalSummary& primal,
                     const DualResult& dual,
                     const std::vector<std::string>& certificates,
                     double tol_gap) {
  GapReport rep;
  rep.certificates = certificates;
  rep.primal_finite = primal.finite;
  rep.primal_value = primal.value;
  rep.dual_finite = dual.finite();
  rep.dual_value = dual.best_value;

  if (!primal.finite) {
    rep.classification = GapClass::inconclusive;
    return rep;
  }
  if (!dual.finite()) {
    rep.classification = (dual.termination ==
                          DualTermination::dual_unbounded_below_everywhere)
                             ? GapClass::infinite_gap
                             : GapClass::inconclusive;
    return rep;
  }
  rep.gap = primal.value - dual.best_value;
  if (rep.gap < -1e-5)
    throw WeakDualityViolation("dual value exceeds primal value by " +
                               std::to_string(-rep.gap));
  if (std::fabs(rep.gap) <= tol_gap)
    rep.classification = GapClass::zero_gap;
  else
    rep.classification = GapClass::positive_gap;
  return rep;
}

}  // namespace qpdual
