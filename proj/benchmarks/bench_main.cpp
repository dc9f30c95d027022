#include <benchmark/benchmark.h>

#include "wordeq/genword.hpp"
#include "wordeq/matcore.hpp"
#include "wordeq/solver.hpp"
#include "wordeq/wordlang.hpp"

namespace {

using namespace wordeq;

void BM_EvaluateWord(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const WordExpr w = parse_word("A^2 B^(-1) A^(1/2) B^3 A^(1/2) B^(-1) A^2");
  const PDMatrix a = random_pd(n, 11, 10.0);
  const PDMatrix b = random_pd(n, 12, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(w, a, b));
  }
}
BENCHMARK(BM_EvaluateWord)->Arg(4)->Arg(8)->Arg(16);

void BM_GeometricMean(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PDMatrix c = random_pd(n, 21, 50.0);
  const PDMatrix d = random_pd(n, 22, 50.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometric_mean(c, d));
  }
}
BENCHMARK(BM_GeometricMean)->Arg(4)->Arg(8)->Arg(16);

void BM_SolveClosedForm(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PDMatrix b = random_pd(n, 31, 10.0);
  const PDMatrix p = random_pd(n, 32, 10.0);
  const Equation eq(parse_word("B A B"), b, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(eq));
  }
}
BENCHMARK(BM_SolveClosedForm)->Arg(4)->Arg(8);

void BM_SolveNewton(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PDMatrix b = random_pd_real(n, 41, 10.0);
  const PDMatrix a_true = random_pd_real(n, 42, 10.0);
  const WordExpr w = parse_word("A^2 B A B A^2");
  const PDMatrix p = evaluate_pd(w, a_true, b);
  const Equation eq(w, b, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(eq));
  }
}
BENCHMARK(BM_SolveNewton)->Arg(2)->Arg(4);

void BM_Linearize(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PDMatrix b = random_pd(n, 51, 10.0);
  const PDMatrix a0 = random_pd(n, 52, 10.0);
  const WordExpr w = parse_word("A^3 B A^2 B A^3");
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearize(w, a0.hermitian(), b));
  }
}
BENCHMARK(BM_Linearize)->Arg(4)->Arg(8);

void BM_FovCertificate(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const PDMatrix base = random_pd(n, 61, 10.0);
  Matrix c = base.matrix();
  c(0, n - 1) += Complex(0.0, 2.0);  // push the field of values off the real axis
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_completely_invertible(c));
  }
}
BENCHMARK(BM_FovCertificate)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
