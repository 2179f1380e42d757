#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpdual/certificates.hpp"
#include "qpdual/corpus.hpp"
#include "qpdual/reformulate.hpp"

using namespace qpdual;

namespace {

MixedIntegerQP toy_miqp() {
  MixedIntegerQP p;
  p.n = 3;
  p.objective = {Matrix{{0, 0.5, 0}, {0.5, 0, 0}, {0, 0, 0}}, {-1, -1, 0}, 0.0};
  p.eq_normals = {{1, 1, 1}};
  p.eq_rhs = {1};
  p.s = 2;
  return p;
}

}  // namespace

TEST_CASE("miqp_to_pd emits 4m + 2s constraints in family order") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> dm(0, 3), dn(1, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = dn(rng), m = dm(rng), s = std::min(n, dm(rng));
    MixedIntegerQP p;
    p.n = n;
    p.objective = {Matrix(n, n), Vector(n, 0.0), 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      p.eq_normals.push_back(Vector(n, 1.0));
      p.eq_rhs.push_back(1.0);
    }
    p.s = s;
    ReformulationMap map = miqp_to_pd(p);
    REQUIRE(map.target.constraint_count() == 4 * m + 2 * s);
    REQUIRE(map.provenance.size() == 4 * m + 2 * s);
    // Families appear in blocks of m, m, m, m, s, s.
    for (std::size_t j = 0; j < m; ++j) {
      CHECK(map.provenance[j].family == "a^Tx - b <= 0");
      CHECK(map.provenance[m + j].family == "-a^Tx + b <= 0");
      CHECK(map.provenance[2 * m + j].family == "(a^Tx)^2 - b^2 <= 0");
      CHECK(map.provenance[3 * m + j].family == "-(a^Tx)^2 + b^2 <= 0");
    }
    for (std::size_t i = 0; i < s; ++i) {
      CHECK(map.provenance[4 * m + i].family == "x_i(x_i - 1) <= 0");
      CHECK(map.provenance[4 * m + s + i].family == "-x_i(x_i - 1) <= 0");
    }
  }
}

TEST_CASE("pd constraints vanish exactly on miqp-feasible points") {
  MixedIntegerQP p = toy_miqp();
  ReformulationMap map = miqp_to_pd(p);
  // (1,0,0) and (0,0,1) are feasible for the miqp.
  for (Vector x : {Vector{1, 0, 0}, Vector{0, 0, 1}, Vector{0, 1, 0}}) {
    for (std::size_t i = 0; i < map.target.constraint_count(); ++i)
      CHECK(map.target.evaluate_constraint(i, x) <= 1e-12);
    CHECK(map.target.evaluate_objective(x) ==
          doctest::Approx(p.objective.eval(x)));
  }
  // A fractional binary violates the complementarity pair.
  Vector frac{0.5, 0, 0.5};
  bool violated = false;
  for (std::size_t i = 0; i < map.target.constraint_count(); ++i)
    if (map.target.evaluate_constraint(i, frac) > 1e-9) violated = true;
  CHECK(violated);
}

TEST_CASE("compute_M bounds the scenario costs over the feasible set") {
  RobustMIQP r = corpus_instance("robust_two_scenario").robust;
  double M = compute_M(r);
  // Scenario costs are e_1 and e_2 on the simplex: max is 1.
  CHECK(M == doctest::Approx(1.0));

  RobustMIQP unbounded = r;
  unbounded.eq_normals = {{1, -1}};  // cone no longer trivial
  unbounded.s = 0;
  CHECK_THROWS(compute_M(unbounded));
}

TEST_CASE("robust_to_ap emits 4(m+q+2) + 2s constraints and the lifted system") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<std::size_t> dq(1, 3), ds(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    RobustMIQP r = corpus_instance("robust_two_scenario").robust;
    std::size_t q = dq(rng);
    r.scenarios.clear();
    for (std::size_t k = 0; k < q; ++k) {
      Vector xi(r.cost_generators.size(), 0.0);
      xi[k % xi.size()] = 0.5 + 0.1 * double(k);
      r.scenarios.push_back(xi);
    }
    r.s = std::min(ds(rng), r.n);
    ReformulationMap map = robust_to_ap(r);
    std::size_t m = r.m();
    REQUIRE(map.target.constraint_count() == 4 * (m + q + 2) + 2 * r.s);
    REQUIRE(map.has_target_miqp);
    CHECK(map.target_miqp.n == r.n + q + 4);
    CHECK(map.target_miqp.m() == m + q + 2);
    CHECK(map.variable_map.size() == r.n + 2 + (q + 2));
  }
}

TEST_CASE("ap objective majorizes the robust objective on lifted points") {
  RobustMIQP r = corpus_instance("robust_two_scenario").robust;
  ReformulationMap map = robust_to_ap(r);
  const MixedIntegerQP& z = map.target_miqp;
  double M = compute_M(r);
  // Lift a feasible x = (1, 0): t1 = envelope value, t2 = 0, v slack.
  Vector x{1, 0};
  double env = -1e300;
  for (std::size_t k = 0; k < r.q(); ++k)
    env = std::max(env, dot(r.scenario_cost(k), x));
  Vector zv(z.n, 0.0);
  zv[0] = x[0];
  zv[1] = x[1];
  zv[2] = env;  // t1
  zv[3] = 0.0;  // t2
  for (std::size_t k = 0; k < r.q(); ++k)
    zv[4 + k] = env - dot(r.scenario_cost(k), x);  // v_k
  zv[4 + r.q()] = M - env;                          // v_{q+1}
  zv[5 + r.q()] = M - env;                          // v_{q+2}
  for (std::size_t j = 0; j < z.m(); ++j)
    CHECK(dot(z.eq_normals[j], zv) == doctest::Approx(z.eq_rhs[j]));
  double robust_obj = x[0] * x[0] * (1.0 + r.rho) + env;  // A0 = I here
  CHECK(z.objective.eval(zv) == doctest::Approx(robust_obj));
}

TEST_CASE("alpha_star for reference HQPs") {
  CHECK(standard_form_alpha_star({Matrix{{-1}}, Matrix{{1}}}) ==
        doctest::Approx(-1.0));
  CHECK(standard_form_alpha_star(
            {Matrix{{1, -2}, {-2, 1}}, Matrix::identity(2)}) ==
        doctest::Approx(-1.0));
  CHECK(standard_form_alpha_star({Matrix::identity(2), Matrix::identity(2)}) ==
        doctest::Approx(1.0));
  CHECK_THROWS(standard_form_alpha_star(
      {Matrix::identity(2), Matrix{{1, 1}, {1, -1}}}));
}

TEST_CASE("copositive relaxation satisfies z^T H z = f(x)") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  QPInstance p;
  p.n = 3;
  auto rand_form = [&]() {
    QuadraticForm f;
    f.A = Matrix(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) f.A(i, j) = f.A(j, i) = d(rng);
    f.b = {d(rng), d(rng), d(rng)};
    f.c = d(rng);
    return f;
  };
  p.objective = rand_form();
  p.constraints = {rand_form(), rand_form()};
  CopositiveRelaxation cp = build_copositive_relaxation(p);
  CHECK(cp.J0(0, 0) == 1.0);
  CHECK(cp.J0.max_abs() == 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector x{d(rng), d(rng), d(rng)};
    Vector z = rank_one_embedding(x);
    double ref = p.objective.eval(x);
    CHECK(cp.H.quad(z) ==
          doctest::Approx(ref).epsilon(1e-10).scale(std::max(1.0, std::fabs(ref))));
    for (std::size_t i = 0; i < 2; ++i) {
      double gref = p.constraints[i].eval(x);
      CHECK(cp.His[i].quad(z) ==
            doctest::Approx(gref).epsilon(1e-10).scale(std::max(1.0, std::fabs(gref))));
    }
  }
}

TEST_CASE("check_hqp follows strict copositivity of B") {
  Certificate holds = check_hqp({Matrix{{-1, 0}, {0, -1}}, Matrix::identity(2)});
  CHECK(holds.verdict == CertificateVerdict::holds);

  Certificate fails = check_hqp({Matrix::identity(2), Matrix{{1, 1}, {1, -1}}});
  CHECK(fails.verdict == CertificateVerdict::fails);
  CHECK(!fails.witness.empty());
}

TEST_CASE("check_RA accepts unit-coefficient binary rows and rejects loose ones") {
  MixedIntegerQP p = toy_miqp();
  CHECK(check_RA(p).verdict == CertificateVerdict::holds);

  MixedIntegerQP loose = p;
  loose.eq_rhs = {2.0};  // max d_1 = 2 > 1
  CHECK(check_RA(loose).verdict == CertificateVerdict::fails);

  MixedIntegerQP vacuous = p;
  vacuous.eq_rhs = {-1.0};  // empty system
  CHECK(check_RA(vacuous).verdict == CertificateVerdict::holds);
}

TEST_CASE("check_RA is invariant under positive row scaling") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    MixedIntegerQP p = toy_miqp();
    p.eq_rhs[0] = trial % 2 ? 1.0 : 2.0;
    Certificate base = check_RA(p);
    MixedIntegerQP scaled_p = p;
    double t = d(rng);
    for (auto& v : scaled_p.eq_normals[0]) v *= t;
    scaled_p.eq_rhs[0] *= t;
    CHECK(check_RA(scaled_p).verdict == base.verdict);
  }
}

TEST_CASE("cone certificates") {
  MixedIntegerQP p = toy_miqp();
  // Objective Hessian has a negative-curvature direction, but the recession
  // cone {d >= 0, sum d = 0} is trivial.
  CHECK(check_thm31_cone(p).verdict == CertificateVerdict::holds);

  MixedIntegerQP open;
  open.n = 2;
  open.objective = {Matrix{{-1, 0}, {0, -1}}, {0, 0}, 0.0};
  CHECK(check_thm31_cone(open).verdict == CertificateVerdict::fails);

  MixedIntegerQP all_binary = open;
  all_binary.s = 2;
  CHECK(check_thm31_cone(all_binary).verdict == CertificateVerdict::holds);

  RobustMIQP r = corpus_instance("robust_two_scenario").robust;
  CHECK(check_thm41_cone(r).verdict == CertificateVerdict::holds);
  RobustMIQP openr = r;
  openr.eq_normals = {{1, -1}};
  openr.s = 0;
  Certificate c = check_thm41_cone(openr);
  CHECK(c.verdict == CertificateVerdict::fails);
  CHECK(!c.witness.empty());
}

TEST_CASE("check_uniform: PSD instance with a nonnegative eigenvector") {
  UniformQPInstance u;
  u.n = 2;
  u.A = Matrix::identity(2);
  u.b = {1, 1};
  u.c = 0.0;
  u.alphas = {1.0};
  u.lin = {{1, 1}};  // b_0 = alpha_0 * b keeps the orthogonality test at zero
  u.consts = {-1.0};
  Certificate c = check_uniform(u);
  CHECK(c.verdict == CertificateVerdict::holds);
}

TEST_CASE("check_uniform fails without the copositivity premise") {
  UniformQPInstance u;
  u.n = 2;
  u.A = Matrix{{-1, 0}, {0, -1}};
  u.b = {0, 0};
  u.c = 0.0;
  u.alphas = {1.0};  // negative s unreachable
  u.lin = {{0, 0}};
  u.consts = {0.0};
  CHECK(check_uniform(u).verdict == CertificateVerdict::fails);
}

TEST_CASE("check_uniform condition (ii) equals condition (i) on the negation") {
  UniformQPInstance u;
  u.n = 2;
  u.A = Matrix{{-1, 0}, {0, -2}};  // -A is PSD
  u.b = {1, 1};
  u.c = 0.0;
  u.alphas = {-1.0};  // negative alpha makes s = -1 reachable
  u.lin = {{-1, -1}};
  u.consts = {0.0};
  Certificate neg = check_uniform(u);

  UniformQPInstance flipped = u;
  flipped.A = u.A * -1.0;
  flipped.b = scaled(u.b, -1.0);
  flipped.lin = {{1, 1}};
  Certificate pos = check_uniform(flipped);
  CHECK(neg.verdict == pos.verdict);
  CHECK(neg.verdict == CertificateVerdict::holds);
}

TEST_CASE("sample_convexifiability matches the worked examples") {
  ConvexifiabilitySample e1 =
      sample_convexifiability(corpus_instance("e1").qp);
  CHECK(e1.diagnosis == ConvexifiabilityDiagnosis::counterexample_found);
  CHECK(e1.hull_slice_min < e1.membership_slice_min - 1.0);

  ConvexifiabilitySample ex21 =
      sample_convexifiability(corpus_instance("example21").qp);
  CHECK(ex21.diagnosis ==
        ConvexifiabilityDiagnosis::consistent_with_convexifiable);

  QPInstance too_big;
  too_big.n = 1;
  too_big.objective = {Matrix{{1}}, {0}, 0.0};
  for (int i = 0; i < 3; ++i) too_big.constraints.push_back({Matrix{{1}}, {0}, 0.0});
  CHECK_THROWS(sample_convexifiability(too_big));
}
