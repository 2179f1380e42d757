#include "qpdual/corpus.hpp"

#include <limits>
#include <stdexcept>

namespace qpdual {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<CorpusEntry> make_corpus() {
  std::vector<CorpusEntry> c;

  c.push_back({"e1",
               "1-D concave toy with an infinite duality gap: min -x^2 s.t. x <= 1",
               R"({
  "kind": "qp", "n": 1,
  "objective": {"A": [[-1]], "b": [0], "c": 0},
  "constraints": [{"A": [[0]], "b": [1], "c": -1}]
})",
               -1.0, "infinite_gap"});

  c.push_back({"example21",
               "min x^2 with the complementary pair x(x-1) <= 0, -x(x-1) <= 0",
               R"({
  "kind": "qp", "n": 1,
  "objective": {"A": [[1]], "b": [0], "c": 0},
  "constraints": [
    {"A": [[1]], "b": [-1], "c": 0},
    {"A": [[-1]], "b": [1], "c": 0}
  ]
})",
               0.0, "zero_gap"});

  c.push_back({"example22",
               "min x_1 s.t. -x_1 x_2 <= 0: convexifiable but with a non-closed image set",
               R"({
  "kind": "qp", "n": 2,
  "objective": {"A": [[0, 0], [0, 0]], "b": [1, 0], "c": 0},
  "constraints": [{"A": [[0, -0.5], [-0.5, 0]], "b": [0, 0], "c": 0}]
})",
               0.0, "zero_gap"});

  c.push_back({"upsilon",
               "homogeneous pair with neither matrix copositive; the image set is nonconvex",
               R"({
  "kind": "qp", "n": 2,
  "objective": {"A": [[-2, 1], [1, 1]], "b": [0, 0], "c": 0},
  "constraints": [{"A": [[1, 1], [1, -1]], "b": [0, 0], "c": 0}]
})",
               0.0, "infinite_gap"});

  c.push_back({"hqp_1d",
               "1-D homogeneous QP: min -x^2 s.t. x^2 <= 1",
               R"({"kind": "hqp", "A": [[-1]], "B": [[1]]})",
               -1.0, "zero_gap"});

  c.push_back({"hqp_neg_identity",
               "2-D homogeneous QP: min -|x|^2 over the unit-ball cap",
               R"({"kind": "hqp", "A": [[-1, 0], [0, -1]], "B": [[1, 0], [0, 1]]})",
               -1.0, "zero_gap"});

  c.push_back({"hqp_indefinite_2d",
               "2-D homogeneous QP with an indefinite objective",
               R"({"kind": "hqp", "A": [[1, -2], [-2, 1]], "B": [[1, 0], [0, 1]]})",
               -1.0, "zero_gap"});

  c.push_back({"miqp_toy",
               "min x_1 + x_2 with x_1 + x_2 = 1 and both variables binary",
               R"({
  "kind": "miqp", "n": 2,
  "objective": {"A": [[0, 0], [0, 0]], "b": [1, 1], "c": 0},
  "eq_normals": [[1, 1]], "eq_rhs": [1], "s": 2
})",
               1.0, ""});

  c.push_back({"knapsack2",
               "two-item toy knapsack with an interaction term and a slack variable",
               R"({
  "kind": "miqp", "n": 3,
  "objective": {"A": [[0, 0.5, 0], [0.5, 0, 0], [0, 0, 0]], "b": [-1, -1, 0], "c": 0},
  "eq_normals": [[1, 1, 1]], "eq_rhs": [1], "s": 2
})",
               -1.0, ""});

  c.push_back({"robust_two_scenario",
               "two-scenario robust toy on the unit simplex with one binary",
               R"({
  "kind": "robust_miqp", "n": 2,
  "A0": [[1, 0], [0, 1]], "rho": 0.5, "c0": [0, 0],
  "cost_generators": [[1, 0], [0, 1]],
  "scenarios": [[1, 0], [0, 1]],
  "eq_normals": [[1, 1]], "eq_rhs": [1], "s": 1
})",
               kNaN, ""});

  c.push_back({"infeasible",
               "empty feasible set: x + 1 <= 0 with x >= 0",
               R"({
  "kind": "qp", "n": 1,
  "objective": {"A": [[0]], "b": [1], "c": 0},
  "constraints": [{"A": [[0]], "b": [1], "c": 1}]
})",
               kNaN, "", true});

  return c;
}

}  // namespace

const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = make_corpus();
  return corpus;
}

ParsedInstance corpus_instance(const std::string& name) {
  for (const auto& e : builtin_corpus())
    if (e.name == name) return parse_instance(e.json);
  throw std::out_of_range("no corpus entry named \"" + name + "\"");
}

}  // namespace qpdual
