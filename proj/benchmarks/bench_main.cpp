#include <benchmark/benchmark.h>

#include "scenechain/chain_synth.hpp"
#include "scenechain/fixtures.hpp"
#include "scenechain/geometry.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/phys_opt.hpp"
#include "scenechain/render.hpp"

using namespace scenechain;

namespace {

const AssetCatalog& catalog() {
  static const AssetCatalog c = AssetCatalog::builtin();
  return c;
}

const Scene& living_room() {
  static const Scene s = normalize_scene(make_fixture_scene("living room", 1, catalog()), catalog());
  return s;
}

void BM_SatPair(benchmark::State& state) {
  const Obb a{{0.0, 0.5, 0.0}, 0.3, {0.6, 0.5, 0.4}};
  const Obb b{{0.8, 0.5, 0.3}, -0.9, {0.5, 0.5, 0.5}};
  for (auto _ : state) benchmark::DoNotOptimize(penetration(a, b));
}
BENCHMARK(BM_SatPair);

void BM_CheckPhysics(benchmark::State& state) {
  const Scene& s = living_room();
  for (auto _ : state) benchmark::DoNotOptimize(check_physics(s));
  state.SetLabel(std::to_string(s.objects.size()) + " objects");
}
BENCHMARK(BM_CheckPhysics);

void BM_Optimize(benchmark::State& state) {
  Rng jr(3);
  const Scene s = jitter_scene(living_room(), jr, 4, 1.0);
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(optimize(s, OptConfig{}, rng));
  }
}
BENCHMARK(BM_Optimize);

void BM_SynthesizeChain(benchmark::State& state) {
  const ChainConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_chain(living_room(), "bench", seed++, cfg, catalog()));
}
BENCHMARK(BM_SynthesizeChain);

void BM_RenderTopdownSvg(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(render_topdown(living_room()));
}
BENCHMARK(BM_RenderTopdownSvg);

void BM_RenderMergedPng(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(render_merged(living_room()));
}
BENCHMARK(BM_RenderMergedPng)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
