#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qpdual/corpus.hpp"
#include "qpdual/json_io.hpp"
#include "qpdual/qp_model.hpp"

using namespace qpdual;

TEST_CASE("quadratic form evaluation and gradient") {
  QuadraticForm f{Matrix{{1, 2}, {2, -1}}, {1, 0}, 3.0};
  Vector x{1, 2};
  CHECK(f.eval(x) == doctest::Approx(1 + 8 - 4 + 1 + 3));
  Vector g = f.gradient(x);
  CHECK(g[0] == doctest::Approx(2 * 1 + 2 * 2 * 2 + 1));
  CHECK(g[1] == doctest::Approx(2 * 2 * 1 - 2 * 2));
  CHECK(!f.is_linear());
  CHECK(QuadraticForm{Matrix(2, 2), {1, 1}, 0.0}.is_linear());
}

TEST_CASE("validation symmetrizes with a warning") {
  QPInstance p;
  p.n = 2;
  p.objective = {Matrix{{0, 1}, {0, 0}}, {0, 0}, 0.0};
  ValidationReport rep = validate(p);
  CHECK(rep.ok());
  CHECK(rep.warning_count() >= 1);
  CHECK(p.objective.A(0, 1) == doctest::Approx(0.5));
  CHECK(p.objective.A(1, 0) == doctest::Approx(0.5));
  // The quadratic form itself is unchanged by symmetrization.
  CHECK(p.objective.eval({1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("validation flags dimension mismatches") {
  QPInstance p;
  p.n = 2;
  p.objective = {Matrix(2, 2), {0, 0, 0}, 0.0};  // wrong b length
  CHECK(!validate(p).ok());

  MixedIntegerQP m;
  m.n = 2;
  m.objective = {Matrix(2, 2), {0, 0}, 0.0};
  m.s = 3;  // more binaries than variables
  CHECK(!validate(m).ok());
}

TEST_CASE("uniform view expands alpha_i A correctly") {
  UniformQPInstance u;
  u.n = 2;
  u.A = Matrix{{1, 0}, {0, 2}};
  u.b = {1, 1};
  u.c = 0.5;
  u.alphas = {2.0, -1.0};
  u.lin = {{0, 1}, {1, 0}};
  u.consts = {-1.0, 0.25};
  QPInstance p = uniform_to_qp(u);
  REQUIRE(p.constraint_count() == 2);
  Vector x{1, 2};
  CHECK(p.objective.eval(x) == doctest::Approx(1 + 8 + 3 + 0.5));
  CHECK(p.constraints[0].eval(x) == doctest::Approx(2.0 * 9 + 2 - 1));
  CHECK(p.constraints[1].eval(x) == doctest::Approx(-9 + 1 + 0.25));
}

TEST_CASE("scenario cost combines generators") {
  RobustMIQP r;
  r.n = 2;
  r.A0 = Matrix::identity(2);
  r.c0 = {1, 0};
  r.cost_generators = {{1, 1}, {0, 2}};
  r.scenarios = {{1, 0}, {0.5, 0.5}};
  Vector c0 = r.scenario_cost(0);
  CHECK(c0[0] == doctest::Approx(2.0));
  CHECK(c0[1] == doctest::Approx(1.0));
  Vector c1 = r.scenario_cost(1);
  CHECK(c1[0] == doctest::Approx(1.5));
  CHECK(c1[1] == doctest::Approx(1.5));
}

TEST_CASE("every corpus entry round-trips through JSON") {
  for (const auto& entry : builtin_corpus()) {
    CAPTURE(entry.name);
    ParsedInstance a = parse_instance(entry.json);
    std::string dumped = to_json(a);
    ParsedInstance b = parse_instance(dumped);
    CHECK(a.kind == b.kind);
    CHECK(to_json(b) == dumped);
  }
}

TEST_CASE("awkward doubles survive the round trip") {
  QPInstance p;
  p.n = 1;
  p.objective = {Matrix{{0.1}}, {1.0 / 3.0}, 1e-17};
  ParsedInstance back = parse_instance(to_json(p));
  CHECK(back.qp.objective.A(0, 0) == 0.1);
  CHECK(back.qp.objective.b[0] == 1.0 / 3.0);
  CHECK(back.qp.objective.c == 1e-17);
}

TEST_CASE("parse errors are reported as ParseError") {
  CHECK_THROWS_AS(parse_instance("{"), ParseError);
  CHECK_THROWS_AS(parse_instance("{\"kind\": \"nope\"}"), ParseError);
  CHECK_THROWS_AS(parse_instance("{\"kind\": \"qp\"}"), ParseError);
  CHECK_THROWS_AS(
      parse_instance(R"({"kind": "hqp", "A": [[1, 2]], "B": [[1]]})"),
      ParseError);  // non-square A
  CHECK_THROWS_AS(corpus_instance("does-not-exist"), std::out_of_range);
}

TEST_CASE("corpus names are unique and parse") {
  const auto& corpus = builtin_corpus();
  CHECK(corpus.size() >= 10);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.size(); ++j)
      CHECK(corpus[i].name != corpus[j].name);
  CHECK(corpus_instance("e1").kind == "qp");
  CHECK(corpus_instance("robust_two_scenario").kind == "robust_miqp");
}
