#include <benchmark/benchmark.h>

#include "psmds/psmds.hpp"

using namespace psmds;

namespace {

DissimilarityMatrix roll_geodesics(std::size_t n) {
  const auto cloud = swissroll(n, false, Sparsity::dense, 2);
  return geodesic_from_points(cloud.points, 12).distances;
}

void BM_PairwiseDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = uniform_initialization(n, 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_distances(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PairwiseDistances)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_GeodesicDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto graph = knn_graph(swissroll(n, false, Sparsity::dense, 2).points, 12);
  for (auto _ : state) benchmark::DoNotOptimize(geodesic_distances(graph));
}
BENCHMARK(BM_GeodesicDistances)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

// One full epoch: every point tries 2L directions.
void BM_PatternSearchEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto target = roll_geodesics(n);
  const auto dirs = search_directions(0.5, dim);
  for (auto _ : state) {
    state.PauseTiming();
    SearchState s(target, uniform_initialization(n, dim, 3));
    state.ResumeTiming();
    for (std::size_t i = 0; i < n; ++i) optimal_move(s, i, dirs, s.error());
    benchmark::DoNotOptimize(s.error());
  }
  state.counters["evaluations"] = static_cast<double>(n * (n - 1) * 2 * dim);
}
BENCHMARK(BM_PatternSearchEpoch)->Args({500, 2})->Args({1000, 2})->Args({1000, 10})->Unit(benchmark::kMillisecond);

void BM_GuttmanStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto target = roll_geodesics(n);
  const auto x = uniform_initialization(n, 2, 3);
  const auto w = WeightMatrix::uniform(n);
  for (auto _ : state) benchmark::DoNotOptimize(guttman_step(x, target, w));
}
BENCHMARK(BM_GuttmanStep)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
