#include <benchmark/benchmark.h>

#include <random>

#include "slfr/graph.hpp"
#include "slfr/harness.hpp"

using namespace slfr;

static void BM_Determinant(benchmark::State& state) {
  const auto& f = FieldSpec::get(10007);
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const FqMatrix m = random_matrix(f, n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(det(m));
}
BENCHMARK(BM_Determinant)->RangeMultiplier(2)->Range(2, 32);

static void BM_ClosedFormDecoding(benchmark::State& state) {
  const auto& f = FieldSpec::get(7);
  const int K = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const auto p = SchemeParams::make(K, 3, 2, f);
  const auto td = select_leaders(random_demand_of_rank(f, K, 3, 3, rng));
  const auto alpha = wan_alpha(p, td.leaders);
  const auto As = enumerate_subsets(IndexSet::range(1, K) - td.leaders, 3);
  for (auto _ : state)
    for (const IndexSet& A : As) benchmark::DoNotOptimize(closed_form_decoding(A, td, alpha));
}
BENCHMARK(BM_ClosedFormDecoding)->DenseRange(6, 9);

static void BM_Oracle(benchmark::State& state) {
  const auto& f = FieldSpec::get(7);
  std::mt19937_64 rng(3);
  const auto p = SchemeParams::make(6, 3, 2, f);
  const auto td = select_leaders(random_demand_of_rank(f, 6, 3, 3, rng));
  const auto alpha = wan_alpha(p, td.leaders);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_beta({4, 5, 6}, td, alpha));
}
BENCHMARK(BM_Oracle);

static void BM_GreedyFreeCoefficients(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const auto g = build_graph(K, 1, {1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(greedy_free_coefficients(g));
}
BENCHMARK(BM_GreedyFreeCoefficients)->DenseRange(4, 8);

static void BM_Simulate(benchmark::State& state) {
  const auto& f = FieldSpec::get(5);
  const int K = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const auto p = SchemeParams::make(K, 2, 1, f, 64 * static_cast<std::size_t>(K));
  const auto D = random_demand_of_rank(f, K, 2, 2, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, D, AlphaChoice::wan(), ++seed));
}
BENCHMARK(BM_Simulate)->DenseRange(4, 7);
BENCHMARK_MAIN();
