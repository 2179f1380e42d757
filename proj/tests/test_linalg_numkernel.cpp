#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpdual/linalg.hpp"
#include "qpdual/numkernel.hpp"

using namespace qpdual;

namespace {

Matrix random_symmetric(std::mt19937& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Matrix M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) M(i, j) = M(j, i) = d(rng);
  return M;
}

}  // namespace

TEST_CASE("matrix basics") {
  Matrix A{{1, 2}, {3, 4}};
  CHECK(A(0, 1) == 2);
  CHECK(A.transposed()(1, 0) == 2);
  CHECK(Matrix::identity(3).quad({1, 2, 3}) == doctest::Approx(14.0));
  Vector v = A.mul({1, 1});
  CHECK(v[0] == 3);
  CHECK(v[1] == 7);
  CHECK(A.bilinear({1, 0}, {0, 1}) == 2);
  Matrix S = A.symmetrized();
  CHECK(S(0, 1) == doctest::Approx(2.5));
  CHECK(S.is_symmetric(0.0));
}

TEST_CASE("vector helpers") {
  Vector x{1, -2, 3};
  CHECK(dot(x, x) == doctest::Approx(14.0));
  CHECK(norm_inf(x) == 3);
  Vector y = axpy(2.0, x, {1, 1, 1});
  CHECK(y[1] == doctest::Approx(-3.0));
  CHECK(unit_vector(4, 2)[2] == 1.0);
}

TEST_CASE("jacobi eigendecomposition reconstructs the matrix") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + trial % 5;
    Matrix A = random_symmetric(rng, n);
    EigenDecomposition ed = sym_eig(A);
    REQUIRE(ed.values.size() == n);
    for (std::size_t k = 0; k + 1 < n; ++k) CHECK(ed.values[k] <= ed.values[k + 1] + 1e-12);
    // A v_k = lambda_k v_k and sum lambda_k v_k v_k^T = A.
    Matrix R(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      Vector v = ed.eigenvector(k);
      CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-9));
      Vector Av = A.mul(v);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(Av[i] == doctest::Approx(ed.values[k] * v[i]).epsilon(1e-7).scale(1.0));
        for (std::size_t j = 0; j < n; ++j) R(i, j) += ed.values[k] * v[i] * v[j];
      }
    }
    CHECK((R - A).max_abs() < 1e-8);
  }
}

TEST_CASE("linear solves") {
  Matrix M{{2, 1}, {1, 3}};
  auto x = solve_linear(M, {3, 5});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == doctest::Approx(0.8));
  CHECK((*x)[1] == doctest::Approx(1.4));

  Matrix S{{1, 1}, {1, 1}};
  CHECK(!solve_linear(S, {1, 2}).has_value());

  // Least squares agrees on a consistent system.
  Vector ls = solve_least_squares(M, {3, 5});
  CHECK(ls[0] == doctest::Approx(0.8));
  CHECK(ls[1] == doctest::Approx(1.4));
}

TEST_CASE("lp_solve basic cases") {
  // min x1 + x2 s.t. x1 + x2 = 1 -> 1; max -> 1 as well.
  Matrix E{{1, 1}};
  LPResult lo = lp_solve({1, 1}, E, {1}, LPSense::minimize);
  REQUIRE(lo.status == LPStatus::optimal);
  CHECK(lo.value == doctest::Approx(1.0));

  // max x1 s.t. x1 - x2 = 0: unbounded along (1,1).
  Matrix E2{{1, -1}};
  LPResult ub = lp_solve({1, 0}, E2, {0}, LPSense::maximize);
  REQUIRE(ub.status == LPStatus::unbounded);
  REQUIRE(ub.ray.size() == 2);
  CHECK(ub.ray[0] > 0);
  CHECK(ub.ray[0] == doctest::Approx(ub.ray[1]));

  // x1 + x2 = -1 with x >= 0: infeasible.
  LPResult inf = lp_solve({1, 1}, E, {-1});
  CHECK(inf.status == LPStatus::infeasible);
}

TEST_CASE("lp optimum matches the best enumerated vertex") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 3 + trial % 3, m = 1 + trial % 2;
    Matrix E(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) E(i, j) = 0.2 + std::fabs(d(rng));
    Vector f(m);
    for (auto& v : f) v = 1.0 + std::fabs(d(rng));
    Vector c(n);
    for (auto& v : c) v = d(rng);

    LPResult lp = lp_solve(c, E, f);
    auto verts = enumerate_vertices(E, f);
    if (lp.status != LPStatus::optimal) continue;
    REQUIRE(!verts.empty());
    double best = 1e300;
    for (const auto& v : verts) best = std::min(best, dot(c, v));
    CHECK(lp.value == doctest::Approx(best).epsilon(1e-8));
    ++solved;
  }
  CHECK(solved > 50);
}

TEST_CASE("vertex enumeration of the simplex") {
  Matrix E{{1, 1, 1}};
  auto verts = enumerate_vertices(E, {1});
  CHECK(verts.size() == 3);
  for (const auto& v : verts) {
    double s = v[0] + v[1] + v[2];
    CHECK(s == doctest::Approx(1.0));
    CHECK(norm_inf(v) == doctest::Approx(1.0));
  }
}
