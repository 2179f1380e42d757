#include <benchmark/benchmark.h>

#include <random>

#include "qpdual/copositivity.hpp"
#include "qpdual/corpus.hpp"
#include "qpdual/oracle.hpp"
#include "qpdual/reformulate.hpp"
#include "qpdual/semilag_dual.hpp"

using namespace qpdual;

namespace {

Matrix random_psd_plus(std::size_t n, unsigned seed, double shift) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Matrix R(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) R(i, j) = d(rng);
  Matrix Q = R.transposed() * R;
  for (std::size_t i = 0; i < n; ++i) Q(i, i) += shift;
  return Q;
}

void BM_check_copositive(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  Matrix Q = random_psd_plus(n, 42, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(check_copositive(Q));
}
BENCHMARK(BM_check_copositive)->Arg(4)->Arg(8)->Arg(12);

void BM_simplex_min(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  Matrix Q = random_psd_plus(n, 7, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(min_quadratic_form_on_simplex(Q));
}
BENCHMARK(BM_simplex_min)->Arg(6)->Arg(10)->Arg(14);

void BM_eval_theta(benchmark::State& state) {
  QPInstance p = corpus_instance("example21").qp;
  Vector u{0.5, 0.25};
  for (auto _ : state) benchmark::DoNotOptimize(eval_theta(p, u));
}
BENCHMARK(BM_eval_theta);

void BM_maximize_dual_hqp(benchmark::State& state) {
  QPInstance p = hqp_to_qp(corpus_instance("hqp_indefinite_2d").hqp);
  for (auto _ : state) benchmark::DoNotOptimize(maximize_dual(p));
}
BENCHMARK(BM_maximize_dual_hqp);

void BM_miqp_bruteforce(benchmark::State& state) {
  MixedIntegerQP p = corpus_instance("knapsack2").miqp;
  for (auto _ : state) benchmark::DoNotOptimize(solve_miqp_bruteforce(p));
}
BENCHMARK(BM_miqp_bruteforce);

void BM_membership(benchmark::State& state) {
  QPInstance p = corpus_instance("example21").qp;
  for (auto _ : state) benchmark::DoNotOptimize(membership(p, {1, -1, 2}));
}
BENCHMARK(BM_membership);

}  // namespace

BENCHMARK_MAIN();
