#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpdual/corpus.hpp"
#include "qpdual/oracle.hpp"
#include "qpdual/reformulate.hpp"

using namespace qpdual;

TEST_CASE("miqp bruteforce on the linear toy") {
  MixedIntegerQP p;
  p.n = 2;
  p.objective = {Matrix(2, 2), {1, 1}, 0.0};
  p.eq_normals = {{1, 1}};
  p.eq_rhs = {1};
  p.s = 2;
  PrimalResult r = solve_miqp_bruteforce(p);
  REQUIRE(r.status == PrimalStatus::attained);
  CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("miqp bruteforce: binaries force the product to zero") {
  MixedIntegerQP p;
  p.n = 2;
  p.objective = {Matrix{{0, 0.5}, {0.5, 0}}, {0, 0}, 0.0};
  p.eq_normals = {{1, 1}};
  p.eq_rhs = {1};
  p.s = 2;
  PrimalResult r = solve_miqp_bruteforce(p);
  REQUIRE(r.status == PrimalStatus::attained);
  CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("miqp bruteforce agrees with a dense grid sweep") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    MixedIntegerQP p;
    p.n = 4;
    p.s = 2;
    p.objective.A = Matrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j)
        p.objective.A(i, j) = p.objective.A(j, i) = d(rng);
    p.objective.b = {d(rng), d(rng), d(rng), d(rng)};
    p.objective.c = 0.0;
    p.eq_normals = {{1, 1, 1, 1}, {1, 0, 1, 0.5}};
    p.eq_rhs = {2, 1};
    PrimalResult exact = solve_miqp_bruteforce(p);
    if (exact.status != PrimalStatus::attained) continue;

    // Exhaustive grid over the two continuous coordinates per pattern.
    double best = 1e300;
    const int steps = 2000;
    for (int b0 = 0; b0 < 2; ++b0)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int k = 0; k <= steps; ++k) {
          double x2 = 2.0 * k / steps;
          // Solve the two equalities for x3 given binaries and x2.
          double x3 = 2.0 * (1 - b0 - x2);  // from row 2: x0 + x2 + 0.5 x3 = 1
          double slack = 2.0 - b0 - b1 - x2 - x3;
          (void)slack;
          Vector x{double(b0), double(b1), x2, x3};
          if (x3 < -1e-9) continue;
          double r1 = x[0] + x[1] + x[2] + x[3];
          if (std::fabs(r1 - 2.0) > 1e-6) continue;
          best = std::min(best, p.objective.eval(x));
        }
    if (best < 1e300)
      CHECK(exact.value <= best + 1e-3);
  }
}

TEST_CASE("qp bruteforce handles E_1 exactly") {
  PrimalResult r = solve_qp_bruteforce(corpus_instance("e1").qp);
  REQUIRE(r.status == PrimalStatus::attained);
  CHECK(!r.approximate);
  CHECK(r.value == doctest::Approx(-1.0));
  CHECK(r.argmin[0] == doctest::Approx(1.0));
}

TEST_CASE("qp bruteforce flags the infeasible instance") {
  PrimalResult r = solve_qp_bruteforce(corpus_instance("infeasible").qp);
  CHECK(r.status == PrimalStatus::infeasible);
  CHECK(r.value == std::numeric_limits<double>::infinity());
}

TEST_CASE("qp bruteforce on the 2-D ball cap") {
  QPInstance p = hqp_to_qp(corpus_instance("hqp_neg_identity").hqp);
  GridOptions g;
  g.box = 1.5;
  PrimalResult r = solve_qp_bruteforce(p, g);
  REQUIRE(r.status == PrimalStatus::attained);
  CHECK(r.approximate);
  CHECK(std::fabs(r.value + 1.0) <= r.error_bar + 1e-9);
}

TEST_CASE("robust bruteforce reduces to the nominal miqp when trivial") {
  RobustMIQP r = corpus_instance("robust_two_scenario").robust;
  r.rho = 0.0;
  r.scenarios = {{0.0, 0.0}};  // single zero scenario: cost c0 = 0
  PrimalResult robust = solve_robust_bruteforce(r);

  MixedIntegerQP nominal;
  nominal.n = r.n;
  nominal.objective = {r.A0, r.c0, 0.0};
  nominal.eq_normals = r.eq_normals;
  nominal.eq_rhs = r.eq_rhs;
  nominal.s = r.s;
  PrimalResult miqp = solve_miqp_bruteforce(nominal);
  REQUIRE(robust.status == PrimalStatus::attained);
  REQUIRE(miqp.status == PrimalStatus::attained);
  CHECK(robust.value == doctest::Approx(miqp.value).epsilon(1e-9));
}

TEST_CASE("robust bruteforce agrees with the lifted miqp pipeline") {
  RobustMIQP r = corpus_instance("robust_two_scenario").robust;
  PrimalResult direct = solve_robust_bruteforce(r);
  ReformulationMap map = robust_to_ap(r);
  PrimalResult lifted = solve_miqp_bruteforce(map.target_miqp);
  REQUIRE(direct.status == PrimalStatus::attained);
  REQUIRE(lifted.status == PrimalStatus::attained);
  CHECK(std::fabs(direct.value - lifted.value) <= 1e-6);
}

TEST_CASE("membership triple of Example 2.1") {
  QPInstance p = corpus_instance("example21").qp;
  MembershipQuery in0 = membership(p, {0, 0, 0});
  CHECK(in0.verdict == MembershipVerdict::member);
  MembershipQuery in1 = membership(p, {2, -2, 4});
  CHECK(in1.verdict == MembershipVerdict::member);
  MembershipQuery out = membership(p, {1, -1, 2});
  CHECK(out.verdict == MembershipVerdict::non_member);
}

TEST_CASE("membership witnesses satisfy the shifted system") {
  QPInstance p = corpus_instance("example21").qp;
  MembershipQuery q = membership(p, {2, -2, 4});
  REQUIRE(q.verdict == MembershipVerdict::member);
  REQUIRE(q.witness.size() == 1);
  CHECK(p.constraints[0].eval(q.witness) <= 2 + 1e-9);
  CHECK(p.constraints[1].eval(q.witness) <= -2 + 1e-9);
  CHECK(p.objective.eval(q.witness) <= 4 + 1e-9);
}

TEST_CASE("Example 2.2: image set is not closed") {
  QPInstance p = corpus_instance("example22").qp;
  for (double k : {1.0, 10.0, 100.0}) {
    MembershipQuery q = membership(p, {-1.0, 1.0 / k});
    CHECK(q.verdict == MembershipVerdict::member);
  }
  MembershipQuery lim = membership(p, {-1.0, 0.0});
  CHECK(lim.verdict == MembershipVerdict::non_member);
}

TEST_CASE("the homogeneous pair rejects the midpoint") {
  QPInstance p = corpus_instance("upsilon").qp;
  CHECK(membership(p, {-1, 1}).verdict == MembershipVerdict::member);
  CHECK(membership(p, {1, -2}).verdict == MembershipVerdict::member);
  CHECK(membership(p, {0, -0.5}).verdict == MembershipVerdict::non_member);
}

TEST_CASE("membership is monotone in the target") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  QPInstance p = corpus_instance("example21").qp;
  int members = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Vector t{d(rng) - 0.5, d(rng) - 0.5, d(rng)};
    MembershipQuery q = membership(p, t);
    if (q.verdict != MembershipVerdict::member) continue;
    Vector up = t;
    for (auto& v : up) v += d(rng);
    CHECK(membership(p, up).verdict == MembershipVerdict::member);
    ++members;
  }
  CHECK(members > 3);
}

TEST_CASE("oracle consistency between miqp and its pd reformulation") {
  for (const char* name : {"miqp_toy", "knapsack2"}) {
    ParsedInstance inst = corpus_instance(name);
    PrimalResult direct = solve_miqp_bruteforce(inst.miqp);
    ReformulationMap map = miqp_to_pd(inst.miqp);
    GridOptions g;
    g.box = 2.0;
    g.points = 41;
    PrimalResult via_pd = solve_qp_bruteforce(map.target, g);
    REQUIRE(direct.status == PrimalStatus::attained);
    REQUIRE(via_pd.status == PrimalStatus::attained);
    CHECK(std::fabs(direct.value - via_pd.value) <= via_pd.error_bar + 1e-6);
  }
}
