#include <benchmark/benchmark.h>

#include "ugk/dataset.hpp"
#include "ugk/model.hpp"
#include "ugk/nn/layers.hpp"
#include "ugk/synthetic.hpp"

namespace {

using namespace ugk;

struct Block {
  std::vector<WeatherRecord> weather;
  std::vector<HeteroGraph> graphs;
  Matrix features;
};

Block block(std::size_t side) {
  SyntheticSpec spec;
  spec.rows = spec.cols = side;
  const GridScene scene = random_scene(spec, "bench");
  Block b;
  b.weather = random_weather(spec, "bench");
  b.graphs = build_graph_sequence(scene, compute_static_features(scene).values, b.weather, spec.graph);
  b.features = block_node_features(scene);
  return b;
}

void BM_RgcnLayer(benchmark::State& state) {
  const Block b = block(static_cast<std::size_t>(state.range(0)));
  const auto hidden = static_cast<std::size_t>(state.range(1));
  nn::ParameterSet params;
  const auto layer = nn::make_rgcn_params(params, "rgcn", b.features.cols, hidden, kNumRelations, 1);
  const nn::Tensor x = nn::Tensor::from_matrix(b.features);
  const auto adjacency = nn::normalized_adjacency(b.graphs[4], kNumRelations, false);
  for (auto _ : state) benchmark::DoNotOptimize(nn::rgcn_forward(x, adjacency, layer));
}

void BM_ModelForward(benchmark::State& state) {
  const Block b = block(static_cast<std::size_t>(state.range(0)));
  ModelConfig cfg;
  cfg.hidden_dim = static_cast<std::size_t>(state.range(1));
  const UrbanGraphModel model(cfg);
  const auto input = prepare_sequence(b.graphs, b.weather, b.features, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(input));
}

void BM_ModelBackward(benchmark::State& state) {
  const Block b = block(20);
  ModelConfig cfg;
  cfg.hidden_dim = static_cast<std::size_t>(state.range(0));
  UrbanGraphModel model(cfg);
  const auto input = prepare_sequence(b.graphs, b.weather, b.features, cfg);
  for (auto _ : state) {
    model.parameters().zero_grad();
    nn::sum(model.forward(input)).backward();
  }
}

}  // namespace

BENCHMARK(BM_RgcnLayer)->Args({20, 32})->Args({50, 128})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ModelForward)->Args({20, 32})->Args({50, 128})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModelBackward)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
