#include "gradcheck_suite.hpp"

#include <algorithm>

#include "ugk/dataset.hpp"
#include "ugk/model.hpp"
#include "ugk/rng.hpp"
#include "ugk/synthetic.hpp"

namespace ugk::cli {

namespace {

using nn::Tensor;

Tensor random_input(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from_values(rows, cols, std::move(v), true);
}

HeteroGraph random_graph(std::size_t n, std::size_t edges_per_relation, Rng& rng) {
  HeteroGraph g;
  g.num_nodes = n;
  for (auto& slot : g.edges) {
    EdgeList edges;
    while (edges.size() < edges_per_relation) {
      const auto src = static_cast<std::uint32_t>(rng.below(n));
      const auto dst = static_cast<std::uint32_t>(rng.below(n));
      if (src == dst) continue;
      const Edge e{src, dst};
      if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    slot = std::make_shared<const EdgeList>(std::move(edges));
  }
  return g;
}

WeatherRecord random_weather_row(int hour, Rng& rng) {
  WeatherRecord w;
  w.hour_index = hour;
  w.clock_hour = 9 + hour;
  w.ghi_wh_m2 = rng.uniform(100.0, 900.0);
  w.wind_speed_ms = rng.uniform(0.5, 6.0);
  w.wind_dir_deg = rng.uniform(0.0, 360.0);
  w.air_temp_c = rng.uniform(26.0, 33.0);
  w.rel_humidity_pct = rng.uniform(50.0, 90.0);
  return w;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& x : m.values) x = rng.uniform(0.0, 1.0);
  return m;
}

}  // namespace

std::vector<GradcheckCase> run_gradcheck_suite(std::uint64_t seed) {
  std::vector<GradcheckCase> out;
  Rng rng = Rng::named(seed, "gradcheck/inputs");

  {
    nn::ParameterSet ps;
    const nn::Linear linear(ps, "linear", 5, 3, seed);
    const Tensor x = random_input(4, 5, rng);
    auto inputs = ps.entries();
    inputs.push_back({"x", x});
    out.push_back({"linear", nn::gradcheck([&] { return nn::random_projection(linear(x), seed); }, inputs)});
  }
  {
    nn::ParameterSet ps;
    const nn::PRelu act(ps, "prelu");
    // Keep inputs away from the kink so the central difference is valid.
    std::vector<double> v(12);
    for (double& x : v) x = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 1.0);
    const Tensor x = Tensor::from_values(3, 4, std::move(v), true);
    auto inputs = ps.entries();
    inputs.push_back({"x", x});
    out.push_back({"prelu", nn::gradcheck([&] { return nn::random_projection(act(x), seed); }, inputs)});
  }
  {
    nn::ParameterSet ps;
    const auto lstm = nn::make_lstm_params(ps, "lstm", 4, 4, seed);
    const Tensor x = random_input(3, 4, rng);
    const Tensor h0 = random_input(3, 4, rng);
    const Tensor c0 = random_input(3, 4, rng);
    auto inputs = ps.entries();
    inputs.push_back({"x", x});
    inputs.push_back({"h0", h0});
    inputs.push_back({"c0", c0});
    out.push_back({"lstm_cell", nn::gradcheck(
                                    [&] {
                                      auto [h, c] = nn::lstm_step(x, h0, c0, lstm);
                                      const std::array<Tensor, 2> both{h, c};
                                      return nn::random_projection(nn::concat_cols(both), seed);
                                    },
                                    inputs)});
  }
  {
    nn::ParameterSet ps;
    std::vector<nn::RgcnLayerParams> layers;
    for (std::size_t l = 0; l < 3; ++l) {
      layers.push_back(nn::make_rgcn_params(ps, "rgcn" + std::to_string(l), l == 0 ? 6 : 5, 5, kNumRelations, seed));
    }
    const auto adj = nn::normalized_adjacency(random_graph(10, 12, rng), kNumRelations, false);
    const Tensor h = random_input(10, 6, rng);
    auto inputs = ps.entries();
    inputs.push_back({"h", h});
    out.push_back({"rgcn_3layer", nn::gradcheck(
                                      [&] {
                                        Tensor x = h;
                                        for (const auto& layer : layers) x = nn::rgcn_forward(x, adj, layer);
                                        return nn::random_projection(x, seed);
                                      },
                                      inputs)});
  }
  {
    const Tensor pred = random_input(5, 3, rng);
    std::vector<double> target(15);
    for (double& t : target) t = rng.uniform(-1.0, 1.0);
    const std::vector<std::uint8_t> mask{1, 0, 1, 1, 0};
    out.push_back({"masked_mse", nn::gradcheck([&] { return nn::masked_mse(pred, target, mask); }, {{"pred", pred}})});
  }

  // Full model on a 5-node, 3-step toy sequence, once per head layout.
  std::vector<HeteroGraph> graphs;
  std::vector<WeatherRecord> weather;
  for (int t = 0; t < 3; ++t) {
    graphs.push_back(random_graph(5, 4, rng));
    weather.push_back(random_weather_row(t, rng));
  }
  const Matrix features = random_matrix(5, 16, rng);
  const std::vector<std::uint8_t> mask{1, 1, 0, 1, 1};
  for (const HeadMode head : {HeadMode::Single, HeadMode::Multi}) {
    ModelConfig cfg;
    cfg.hidden_dim = 4;
    cfg.t_pred = 3;
    cfg.seed = seed;
    cfg.head_mode = head;
    const UrbanGraphModel model(cfg);
    const PreparedSequence seq = prepare_sequence(graphs, weather, features, cfg);
    std::vector<double> target(5 * cfg.t_pred);
    for (double& t : target) t = rng.uniform(-1.0, 1.0);
    out.push_back({"model_" + std::string(head_mode_name(head)),
                   nn::gradcheck([&] { return nn::masked_mse(model.forward(seq), target, mask); },
                                 model.parameters().entries())});
  }
  return out;
}

}  // namespace ugk::cli
