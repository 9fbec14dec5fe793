#include <benchmark/benchmark.h>

#include "vrlab/cache_sim.hpp"
#include "vrlab/dedup.hpp"
#include "vrlab/mesh.hpp"
#include "vrlab/pipeline.hpp"
#include "vrlab/random_walk.hpp"
#include "vrlab/reorder.hpp"

using namespace vrlab;

namespace {

const IndexedMesh& sphere() {
  static const IndexedMesh m = reorder_forsyth(gen_icosphere(5));
  return m;
}

void dedup_only(benchmark::State& state, Strategy s) {
  const auto& m = sphere();
  BatchConfig cfg;
  const auto batches = make_batches(s, m.indices, cfg);
  for (auto _ : state) {
    auto r = deduplicate(s, m.indices, batches, cfg);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.indices.size()));
}

void full_pipeline(benchmark::State& state, Strategy s) {
  const auto& m = sphere();
  const auto shader = transform_shader(m);
  const ExecutionOptions exec{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) {
    auto r = run_strategy(s, m, {}, {}, shader, exec);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.indices.size()));
}

void BM_DynamicBatching(benchmark::State& state) {
  const auto& m = sphere();
  for (auto _ : state) {
    auto b = dynamic_batches(m.indices, BatchConfig{});
    benchmark::DoNotOptimize(b);
  }
}

void BM_CacheSim(benchmark::State& state) {
  const auto& m = sphere();
  CacheConfig cfg;
  cfg.wave_width = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    auto r = simulate_parallel_cache(m.indices, cfg);
    benchmark::DoNotOptimize(r);
  }
}

void BM_Forsyth(benchmark::State& state) {
  const auto m = shuffle_triangles(gen_icosphere(static_cast<unsigned>(state.range(0))), 1);
  for (auto _ : state) {
    auto r = reorder_forsyth(m);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.triangle_count()));
}

void BM_WalkStep(benchmark::State& state) {
  walk::WalkConfig cfg;
  cfg.agents = static_cast<std::uint32_t>(state.range(0));
  cfg.steps = 1;
  const auto initial = walk::place_agents(cfg, walk::Placement::uniform);
  for (auto _ : state) {
    auto r = walk::run_walk(cfg, initial, Strategy::sorting);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(dedup_only, naive, Strategy::naive);
BENCHMARK_CAPTURE(dedup_only, warp, Strategy::warp_voting);
BENCHMARK_CAPTURE(dedup_only, sort, Strategy::sorting);
BENCHMARK_CAPTURE(dedup_only, hash, Strategy::hashing);
BENCHMARK_CAPTURE(dedup_only, phash, Strategy::parallel_hashing);
BENCHMARK_CAPTURE(full_pipeline, sort, Strategy::sorting)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK_CAPTURE(full_pipeline, phash, Strategy::parallel_hashing)->Arg(1)->Arg(4)->UseRealTime();
BENCHMARK(BM_DynamicBatching);
BENCHMARK(BM_CacheSim)->Arg(32)->Arg(1024);
BENCHMARK(BM_Forsyth)->Arg(3)->Arg(5);
BENCHMARK(BM_WalkStep)->Arg(1000)->Arg(20000);

BENCHMARK_MAIN();
