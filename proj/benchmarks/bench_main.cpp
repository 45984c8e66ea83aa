#include "qekr/families.hpp"
#include "qekr/grassmann.hpp"
#include "qekr/qarith.hpp"
#include "qekr/schemes.hpp"

#include <benchmark/benchmark.h>

using namespace qekr;

static void BM_GaussBinom(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state)
    for (long k = 0; k <= n; ++k) benchmark::DoNotOptimize(gauss_binom(n, k, 3));
}
BENCHMARK(BM_GaussBinom)->Arg(16)->Arg(64);

static void BM_Enumerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), k = static_cast<int>(state.range(1));
  const int q = static_cast<int>(state.range(2));
  auto field = make_field(q);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(n, k, field, 50000).size());
}
BENCHMARK(BM_Enumerate)->Args({6, 3, 2})->Args({7, 3, 2})->Args({5, 2, 3})->Unit(benchmark::kMillisecond);

static void BM_Adjacency(benchmark::State& state) {
  auto g = enumerate(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), make_field(2));
  for (auto _ : state) benchmark::DoNotOptimize(qkneser_adjacency(g).rows());
}
BENCHMARK(BM_Adjacency)->Args({5, 2})->Args({6, 3})->Unit(benchmark::kMillisecond);

static void BM_Eigenprojectors(benchmark::State& state) {
  Workspace ws(static_cast<int>(state.range(0)), 2, 2);
  IntMatrix m = ws.adjacency().to_dense();
  const auto& spec = ws.spectrum();
  for (auto _ : state) benchmark::DoNotOptimize(eigenprojectors(m, spec).size());
}
BENCHMARK(BM_Eigenprojectors)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_KneserProjection(benchmark::State& state) {
  Workspace ws(7, 3, 2);
  Family f = canonical_pencil(ws.grassmannian(3));
  RationalVector h = f.indicator();
  const auto& op = ws.kneser();
  for (auto _ : state) benchmark::DoNotOptimize(project(h, op, ws.spectrum()).total_norm);
}
BENCHMARK(BM_KneserProjection)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
