#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpdual/corpus.hpp"
#include "qpdual/orthant_qp.hpp"
#include "qpdual/semilag_dual.hpp"

using namespace qpdual;

namespace {

QPInstance corpus_qp(const std::string& name) { return corpus_instance(name).qp; }

QPInstance random_qp(std::mt19937& rng, std::size_t n, std::size_t m) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto form = [&](double diag_shift) {
    QuadraticForm f;
    f.A = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) f.A(i, j) = f.A(j, i) = d(rng);
    for (std::size_t i = 0; i < n; ++i) f.A(i, i) += diag_shift;
    f.b.resize(n);
    for (auto& v : f.b) v = d(rng);
    f.c = d(rng);
    return f;
  };
  QPInstance p;
  p.n = n;
  p.objective = form(1.5);  // diagonally shifted: usually strictly copositive
  for (std::size_t i = 0; i < m; ++i) p.constraints.push_back(form(0.5));
  return p;
}

}  // namespace

TEST_CASE("convex orthant minimum matches the KKT solution") {
  // min x^T I x - 2 e^T x: unconstrained min at e, inside the orthant.
  ThetaResult t = min_quadratic_orthant(Matrix::identity(3), {-2, -2, -2}, 5.0);
  REQUIRE(t.attained());
  CHECK(t.value == doctest::Approx(5.0 - 3.0));
  for (double x : t.minimizer) CHECK(x == doctest::Approx(1.0));

  // Active bound: min x^2 + 2x -> 0 at x = 0.
  ThetaResult s = min_quadratic_orthant(Matrix{{1}}, {2}, 0.0);
  REQUIRE(s.attained());
  CHECK(s.value == doctest::Approx(0.0));
}

TEST_CASE("concave direction gives minus infinity with a certified ray") {
  ThetaResult t = min_quadratic_orthant(Matrix{{-1, 0}, {0, 1}}, {0, 0}, 0.0);
  REQUIRE(t.minus_inf());
  REQUIRE(!t.unbounded_ray.empty());
  const Vector& r = t.unbounded_ray;
  CHECK(Matrix{{-1, 0}, {0, 1}}.quad(r) < 0.0);
}

TEST_CASE("minus-infinity verdicts are sound along the reported ray") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + trial % 3;
    Matrix Q(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) Q(i, j) = Q(j, i) = d(rng);
    Vector q(n);
    for (auto& v : q) v = d(rng);
    ThetaResult t = min_quadratic_orthant(Q, q, 0.0);
    if (!t.minus_inf()) continue;
    double curv = Q.quad(t.unbounded_ray);
    if (curv < -1e-3) {
      // The quadratic along x = base + s * ray must pass below -1e6.
      Vector base = t.ray_base.empty() ? Vector(n, 0.0) : t.ray_base;
      bool below = false;
      for (double s = 1.0; s < 1e6 && !below; s *= 2.0) {
        Vector x = axpy(s, t.unbounded_ray, base);
        if (Q.quad(x) + dot(q, x) < -1e6) below = true;
      }
      CHECK(below);
      ++hits;
    }
  }
  CHECK(hits > 20);
}

TEST_CASE("polytope minimum on the simplex") {
  // min x^T diag(1, -1) x over the unit simplex: -1 at e_2.
  ThetaResult t = min_quadratic_polytope(Matrix{{1, 0}, {0, -1}}, {0, 0}, 0.0,
                                         {{1, 1}}, {1});
  REQUIRE(t.attained());
  CHECK(t.value == doctest::Approx(-1.0));
  CHECK(t.minimizer[1] == doctest::Approx(1.0));

  // Interior stationary point: min (x1 - x2)^2 + x1 on the simplex,
  // attained at x = (3/8, 5/8) with value 7/16.
  ThetaResult s = min_quadratic_polytope(Matrix{{1, -1}, {-1, 1}}, {1, 0}, 0.0,
                                         {{1, 1}}, {1});
  REQUIRE(s.attained());
  CHECK(s.value == doctest::Approx(7.0 / 16.0));

  ThetaResult inf = min_quadratic_polytope(Matrix::identity(2), {0, 0}, 0.0,
                                           {{1, 1}}, {-1});
  CHECK(inf.status == ThetaStatus::infeasible);
}

TEST_CASE("theta evaluation on E_1") {
  QPInstance e1 = corpus_qp("e1");
  // Theta(u) = inf -x^2 + u(x - 1) = -inf for every u >= 0.
  for (double u : {0.0, 1.0, 100.0}) {
    ThetaResult t = eval_theta(e1, {u});
    CHECK(t.minus_inf());
  }
  CHECK_THROWS(eval_theta(e1, {-1.0}));
}

TEST_CASE("dual of E_1 is unbounded below everywhere") {
  DualResult r = maximize_dual(corpus_qp("e1"));
  CHECK(r.unbounded);
  CHECK(r.termination == DualTermination::dual_unbounded_below_everywhere);
}

TEST_CASE("dual of the 1-D HQP attains -1") {
  // min -x^2 s.t. x^2 <= 1: Theta(u) = -u for u >= 1, else -inf.
  QPInstance p;
  p.n = 1;
  p.objective = {Matrix{{-1}}, {0}, 0.0};
  p.constraints.push_back({Matrix{{1}}, {0}, -1.0});
  DualResult r = maximize_dual(p);
  REQUIRE(r.finite());
  CHECK(r.best_value == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("dual of Example 2.1 closes the gap at 0") {
  DualResult r = maximize_dual(corpus_qp("example21"));
  REQUIRE(r.finite());
  CHECK(r.best_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("theta is concave along midpoints") {
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> du(0.0, 3.0);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    QPInstance p = random_qp(rng, 2 + trial % 2, 1 + trial % 2);
    Vector u1(p.constraint_count()), u2(p.constraint_count());
    for (auto& v : u1) v = du(rng);
    for (auto& v : u2) v = du(rng);
    Vector mid = axpy(0.5, u1, scaled(u2, 0.5));
    ThetaResult t1 = eval_theta(p, u1), t2 = eval_theta(p, u2),
                tm = eval_theta(p, mid);
    if (!t1.attained() || !t2.attained() || !tm.attained()) continue;
    CHECK(tm.value >= 0.5 * (t1.value + t2.value) - 1e-7);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("attained theta values yield valid supergradient cuts") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> du(0.0, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    QPInstance p = random_qp(rng, 2, 2);
    Vector u0(2), u(2);
    for (auto& v : u0) v = du(rng);
    for (auto& v : u) v = du(rng);
    ThetaResult t0 = eval_theta(p, u0);
    ThetaResult t = eval_theta(p, u);
    if (!t0.attained() || !t.attained()) continue;
    Vector g(2);
    for (std::size_t i = 0; i < 2; ++i) g[i] = p.constraints[i].eval(t0.minimizer);
    double cut = t0.value + dot(g, axpy(-1.0, u0, u));
    CHECK(t.value <= cut + 1e-8);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("gap report classifications") {
  QPInstance p = corpus_qp("example21");
  PrimalSummary primal{0.0, true, true};
  DualResult dual;
  dual.best_value = -1e-7;
  dual.unbounded = false;
  dual.termination = DualTermination::converged;
  CHECK(gap_report(p, primal, dual).classification == GapClass::zero_gap);

  dual.best_value = -0.5;
  CHECK(gap_report(p, primal, dual).classification == GapClass::positive_gap);

  DualResult unb;
  unb.unbounded = true;
  unb.termination = DualTermination::dual_unbounded_below_everywhere;
  CHECK(gap_report(p, primal, unb).classification == GapClass::infinite_gap);

  unb.termination = DualTermination::undecided_inner;
  CHECK(gap_report(p, primal, unb).classification == GapClass::inconclusive);

  PrimalSummary infeas{0.0, false, true};
  CHECK(gap_report(p, infeas, dual).classification == GapClass::inconclusive);

  DualResult breach;
  breach.best_value = 1.0;
  breach.unbounded = false;
  CHECK_THROWS_AS(gap_report(p, primal, breach), WeakDualityViolation);
}

TEST_CASE("dual history is monotone in the incumbent") {
  DualResult r = maximize_dual(corpus_qp("example21"));
  for (std::size_t i = 1; i < r.history.size(); ++i)
    CHECK(r.history[i].theta.value >= r.history[i - 1].theta.value - 1e-12);
}
