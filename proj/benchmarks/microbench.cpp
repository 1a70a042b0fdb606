#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

#include "mlx/extraction.hpp"
#include "mlx/refinement.hpp"
#include "mlx/scoring.hpp"
#include "mlx/simgen.hpp"

namespace {

using namespace mlx;

const Simulation& two_block(std::size_t n, std::size_t m) {
  static std::map<std::pair<std::size_t, std::size_t>, Simulation> cache;
  auto& sim = cache[{n, m}];
  if (sim.network.num_vertices() == 0) sim = generate_msbm(n, m, standard_msbm_params(2, 0.08, m), 1);
  return sim;
}

LayerSet all_layers(std::size_t m) {
  LayerSet out(m);
  std::iota(out.begin(), out.end(), LayerId{0});
  return out;
}

void BM_generate_msbm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_msbm(n, 1, standard_msbm_params(2, 0.08, 1), ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}
BENCHMARK(BM_generate_msbm)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_score_delta(benchmark::State& state) {
  const auto& sim = two_block(1000, 10);
  const ScoreState s(sim.network, sim.truth.communities[0].vertices);
  const auto layers = all_layers(10);
  VertexId u = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_delta(s, layers, u));
    u = (u + 1) % 1000;
  }
}
BENCHMARK(BM_score_delta);

void BM_best_toggle(benchmark::State& state) {
  const auto& sim = two_block(1000, 10);
  const ScoreState s(sim.network, sim.truth.communities[0].vertices);
  const auto layers = all_layers(10);
  const bool frontier = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(s.best_toggle(layers, ScalingPolicy::linear, 2, frontier));
}
BENCHMARK(BM_best_toggle)->Arg(0)->Arg(1);

void BM_vertex_set_search(benchmark::State& state) {
  const auto& sim = two_block(1000, 1);
  const auto seed = neighborhood(sim.network, 0, 0);
  const LayerSet layers{0};
  for (auto _ : state) benchmark::DoNotOptimize(vertex_set_search(sim.network, seed, layers));
}
BENCHMARK(BM_vertex_set_search)->Unit(benchmark::kMillisecond);

void BM_extract_all(benchmark::State& state) {
  const auto& sim = two_block(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(extract_all(sim.network));
}
BENCHMARK(BM_extract_all)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_default_beta(benchmark::State& state) {
  const auto& sim = two_block(300, 3);
  const auto candidates = extract_all(sim.network);
  for (auto _ : state) benchmark::DoNotOptimize(default_beta(candidates));
  state.counters["candidates"] = static_cast<double>(candidates.size());
}
BENCHMARK(BM_default_beta)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
