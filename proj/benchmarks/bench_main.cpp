#include <benchmark/benchmark.h>

#include "trxy/expression.hpp"
#include "trxy/free_probability.hpp"
#include "trxy/graphs.hpp"
#include "trxy/swap.hpp"

using namespace trxy;

static void BM_Correlator(benchmark::State& state, const char* curve, int g, int n) {
  for (auto _ : state) {
    CorrelatorTable t(catalog_curve(curve));
    benchmark::DoNotOptimize(t.get(g, n));
  }
}
BENCHMARK_CAPTURE(BM_Correlator, airy_w21, "airy", 2, 1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Correlator, two_sided_w12, "two-sided", 1, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Correlator, gaussian_w03, "gaussian", 0, 3)->Unit(benchmark::kMillisecond);

static void BM_Swap(benchmark::State& state, const char* curve, int g, int n, SwapMethod m) {
  CorrelatorTable t(catalog_curve(curve));
  for (auto [dg, dn] : SwapEngine(t).dependencies(g, n)) t.get(dg, dn);
  for (auto _ : state) {
    SwapEngine e(t);
    benchmark::DoNotOptimize(e.compute(g, n, m));
  }
}
BENCHMARK_CAPTURE(BM_Swap, airy_21_graphs, "airy", 2, 1, SwapMethod::Graphs)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Swap, airy_21_operator, "airy", 2, 1, SwapMethod::Operator)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Swap, two_sided_12_graphs, "two-sided", 1, 2, SwapMethod::Graphs)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Swap, two_sided_21_exp, "two-sided", 2, 1, SwapMethod::Exponential)->Unit(benchmark::kMillisecond);

static void BM_EnumerateDecorated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int g = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_decorated(n, g));
}
BENCHMARK(BM_EnumerateDecorated)->Args({1, 2})->Args({2, 2})->Args({1, 3})->Args({3, 1});

static void BM_MomentsFromCumulants(benchmark::State& state) {
  CumulantSeries c;
  c.entries[{0, 1}] = MultiSeries::from_coefficients(1, kExactOrder, {{{0}, Rational(1)}, {{2}, Rational(1)}});
  const int g = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(moments_from_cumulants(c, g, n, 8));
}
BENCHMARK(BM_MomentsFromCumulants)->Args({0, 2})->Args({1, 1})->Args({0, 3})->Unit(benchmark::kMillisecond);

static void BM_PolynomialGcd(benchmark::State& state) {
  RationalFunction a = parse_rational_function("(z1 - z2)^3*(z1 + 2*z2 - 1)^2*(z1^2 + z2)");
  RationalFunction b = parse_rational_function("(z1 - z2)^2*(z1 + 2*z2 - 1)*(z2^3 - z1)");
  for (auto _ : state) benchmark::DoNotOptimize(gcd(a.num(), b.num()));
}
BENCHMARK(BM_PolynomialGcd);
BENCHMARK_MAIN();
