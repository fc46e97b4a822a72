#include <benchmark/benchmark.h>

#include "ugk/graph.hpp"
#include "ugk/solar.hpp"
#include "ugk/synthetic.hpp"

namespace {

using namespace ugk;

struct Fixture {
  GridScene scene;
  Matrix features;
  std::vector<WeatherRecord> weather;
  GraphConfig cfg;
};

Fixture fixture(std::size_t side) {
  SyntheticSpec spec;
  spec.rows = spec.cols = side;
  Fixture f;
  f.scene = random_scene(spec, "bench");
  f.weather = random_weather(spec, "bench");
  f.features = compute_static_features(f.scene).values;
  f.cfg = spec.graph;
  return f;
}

void BM_Shadow(benchmark::State& state) {
  const Fixture f = fixture(static_cast<std::size_t>(state.range(0)));
  const SunState sun = sun_for(f.weather[1], f.scene);
  for (auto _ : state) benchmark::DoNotOptimize(build_shadow_edges(f.scene, sun, f.cfg));
}

void BM_Vegetation(benchmark::State& state) {
  const Fixture f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_vegetation_edges(f.scene, f.weather[4], f.cfg));
}

void BM_Wind(benchmark::State& state) {
  const Fixture f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_wind_edges(f.scene, f.weather[4], f.cfg));
}

void BM_Similarity(benchmark::State& state) {
  const Fixture f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_similarity_edges(f.features, f.cfg.k_similarity));
}

// Brute force references, for the speed-up of the indexed builders.
void BM_BruteForce(benchmark::State& state, RelationKind relation) {
  const Fixture f = fixture(static_cast<std::size_t>(state.range(0)));
  const SunState sun = sun_for(f.weather[4], f.scene);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bruteforce_edges(f.scene, f.features, f.weather[4], sun, f.cfg, relation));
  }
}

void BM_Sequence(benchmark::State& state) {
  const Fixture f = fixture(50);
  const auto threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_sequence(f.scene, f.features, f.weather, f.cfg, threads));
}

}  // namespace

BENCHMARK(BM_Shadow)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Vegetation)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Wind)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Similarity)->Arg(20)->Arg(50)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_BruteForce, shadow, RelationKind::Shadow)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BruteForce, wind, RelationKind::ConvectiveDiffusion)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BruteForce, similarity, RelationKind::SemanticSimilarity)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sequence)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
