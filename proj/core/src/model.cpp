#include "ugk/model.hpp"

#include <cmath>
#include <numbers>

#include "ugk/csv.hpp"

namespace ugk {

using nn::Tensor;

std::string_view head_mode_name(HeadMode m) { return m == HeadMode::Single ? "single" : "multi"; }

HeadMode parse_head_mode(std::string_view text) {
  if (text == "single" || text == "SingleHead") return HeadMode::Single;
  if (text == "multi" || text == "MultiHead") return HeadMode::Multi;
  throw Error(ErrorCode::InvalidConfig, "unknown head mode " + std::string(text));
}

Ablations parse_ablation(std::string_view variant) {
  Ablations a;
  if (variant == "homogeneous") {
    a.homogeneous = true;
  } else if (variant == "static_graph") {
    a.static_graph = true;
  } else if (variant == "no_warmup") {
    a.no_warmup = true;
  } else if (variant == "single_hour") {
    a.single_hour = true;
  } else if (variant.substr(0, 5) == "drop:") {
    a.edge_mask = parse_relation_list(variant.substr(5));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown ablation variant " + std::string(variant));
  }
  return a;
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (node_dim == 0) fail("node_dim must be positive");
  if (hidden_dim == 0) fail("hidden_dim must be positive");
  if (rgcn_layers == 0) fail("rgcn_layers must be positive");
  if (lstm_layers == 0) fail("lstm_layers must be positive");
  if (t_pred == 0) fail("t_pred must be at least 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) fail("lr must be positive");
  if (batch_size == 0) fail("batch_size must be positive");
  if (!(weight_decay >= 0.0)) fail("weight_decay must be non-negative");
  if (!(plateau_factor > 0.0 && plateau_factor < 1.0)) fail("plateau factor must be in (0, 1)");
  if (max_epochs == 0) fail("max_epochs must be positive");
}

std::string ModelConfig::canonical() const {
  std::string s;
  auto put = [&](std::string_view key, const std::string& value) {
    s += key;
    s += '=';
    s += value;
    s += ';';
  };
  put("node_dim", std::to_string(node_dim));
  put("hidden_dim", std::to_string(hidden_dim));
  put("rgcn_layers", std::to_string(rgcn_layers));
  put("lstm_layers", std::to_string(lstm_layers));
  put("head_mode", std::string(head_mode_name(head_mode)));
  put("t_pred", std::to_string(t_pred));
  put("seed", std::to_string(seed));
  put("use_edge_weights", use_edge_weights ? "1" : "0");
  put("lr", format_double(lr));
  put("batch_size", std::to_string(batch_size));
  put("weight_decay", format_double(weight_decay));
  put("plateau_factor", format_double(plateau_factor));
  put("plateau_patience", std::to_string(plateau_patience));
  put("early_stop_patience", std::to_string(early_stop_patience));
  put("max_epochs", std::to_string(max_epochs));
  put("static_graph", ablations.static_graph ? "1" : "0");
  put("homogeneous", ablations.homogeneous ? "1" : "0");
  put("edge_mask", format_relation_list(ablations.edge_mask));
  put("no_warmup", ablations.no_warmup ? "1" : "0");
  put("single_hour", ablations.single_hour ? "1" : "0");
  return s;
}

namespace {

// sin/cos of a fraction of a full turn, reduced to the nearest quarter turn
// first so quarter points come out exact and symmetric.
std::pair<double, double> sincos_turns(double turns) {
  const double quarters = turns * 4.0;
  const double k = std::round(quarters);
  const double rest = (quarters - k) * (std::numbers::pi / 2.0);
  const double s = std::sin(rest), c = std::cos(rest);
  switch (static_cast<long long>(std::fmod(std::fmod(k, 4.0) + 4.0, 4.0))) {
    case 0:
      return {s, c};
    case 1:
      return {c, -s};
    case 2:
      return {-s, -c};
    default:
      return {-c, s};
  }
}

}  // namespace

ContextFeatures context_features(const WeatherRecord& w) {
  ContextFeatures f;
  const auto [ws, wc] = sincos_turns(w.wind_dir_deg / 360.0);
  f.env = {w.ghi_wh_m2 / 1000.0, w.wind_speed_ms / 10.0, ws, wc, (w.air_temp_c - 30.0) / 10.0,
           w.rel_humidity_pct / 100.0};
  const auto [ts, tc] = sincos_turns(static_cast<double>(w.clock_hour) / 24.0);
  f.time = {ts, tc};
  return f;
}

PreparedSequence prepare_sequence(std::span<const HeteroGraph> graphs, std::span<const WeatherRecord> weather,
                                  const Matrix& node_features, const ModelConfig& cfg) {
  if (graphs.size() != weather.size()) {
    throw Error(ErrorCode::LengthMismatch, "graph and weather sequences differ in length");
  }
  if (graphs.empty()) throw Error(ErrorCode::LengthMismatch, "empty sequence");
  PreparedSequence seq;
  seq.num_nodes = graphs[0].num_nodes;
  if (node_features.rows != seq.num_nodes) throw Error(ErrorCode::ShapeMismatch, "feature rows != graph nodes");
  seq.node_features = Tensor::from_matrix(node_features);
  const Ablations& ab = cfg.ablations;
  for (std::size_t t = 0; t < graphs.size(); ++t) {
    const HeteroGraph& source = ab.static_graph ? graphs[0] : graphs[t];
    if (source.num_nodes != seq.num_nodes) throw Error(ErrorCode::ShapeMismatch, "graph node counts differ");
    HeteroGraph g = ab.edge_mask.any() ? drop_relations(source, ab.edge_mask) : source;
    if (ab.homogeneous) g = merge_relations(g);
    seq.adjacency.push_back(nn::normalized_adjacency(g, cfg.num_relations(), cfg.use_edge_weights));
    seq.context.push_back(context_features(weather[t]));
  }
  return seq;
}

UrbanGraphModel::UrbanGraphModel(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const std::size_t h = cfg_.hidden_dim;
  const std::uint64_t seed = cfg_.seed;
  env_encoder_ = nn::Mlp2(params_, "env", kEnvDim, h, h, seed, true);
  time_encoder_ = nn::Mlp2(params_, "time", kTimeDim, h, h, seed, true);
  for (std::size_t l = 0; l < cfg_.rgcn_layers; ++l) {
    rgcn_.push_back(nn::make_rgcn_params(params_, "rgcn" + std::to_string(l), l == 0 ? cfg_.node_dim : h, h,
                                         cfg_.num_relations(), seed));
  }
  fusion_ = nn::Mlp2(params_, "fusion", 3 * h, h, h, seed, true);
  if (cfg_.ablations.single_hour) {
    heads_.emplace_back(params_, "head", h, h, 1, seed, false);
    return;
  }
  if (!cfg_.ablations.no_warmup) warmup_ = nn::Mlp2(params_, "warmup", h, h, h, seed, true);
  for (std::size_t l = 0; l < cfg_.lstm_layers; ++l) {
    lstm_.push_back(nn::make_lstm_params(params_, "lstm" + std::to_string(l), h, h, seed));
  }
  if (cfg_.head_mode == HeadMode::Single) {
    heads_.emplace_back(params_, "head", h, h, cfg_.t_pred, seed, false);
  } else {
    for (std::size_t t = 0; t < cfg_.t_pred; ++t) {
      heads_.emplace_back(params_, "head" + std::to_string(t), h, h, 1, seed, false);
    }
  }
}

std::pair<Tensor, Tensor> UrbanGraphModel::encode_context(const ContextFeatures& context) const {
  Tensor env = Tensor::from_values(1, kEnvDim, {context.env.begin(), context.env.end()});
  Tensor time = Tensor::from_values(1, kTimeDim, {context.time.begin(), context.time.end()});
  return {env_encoder_(env), time_encoder_(time)};
}

Tensor UrbanGraphModel::rgcn_stack(const Tensor& x, const nn::RelationAdjacency& adjacency) const {
  Tensor h = x;
  for (const auto& layer : rgcn_) h = nn::rgcn_forward(h, adjacency, layer);
  return h;
}

Tensor UrbanGraphModel::forward(const PreparedSequence& seq) const {
  const std::size_t steps = seq.adjacency.size();
  if (steps != cfg_.t_pred || seq.context.size() != cfg_.t_pred) {
    throw Error(ErrorCode::LengthMismatch, "sequence has " + std::to_string(steps) + " steps, model expects " +
                                               std::to_string(cfg_.t_pred));
  }
  const std::size_t n = seq.num_nodes;
  if (seq.node_features.rows() != n || seq.node_features.cols() != cfg_.node_dim) {
    throw Error(ErrorCode::ShapeMismatch, "node features must be |V| x " + std::to_string(cfg_.node_dim));
  }
  const std::size_t hd = cfg_.hidden_dim;

  std::vector<Tensor> spatial, fused;
  spatial.reserve(steps);
  fused.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    spatial.push_back(rgcn_stack(seq.node_features, seq.adjacency[t]));
    auto [e_env, e_time] = encode_context(seq.context[t]);
    const std::array<Tensor, 3> parts{spatial.back(), nn::broadcast_rows(e_env, n), nn::broadcast_rows(e_time, n)};
    fused.push_back(fusion_(nn::concat_cols(parts)));
  }

  std::vector<Tensor> columns;
  if (cfg_.ablations.single_hour) {
    for (const Tensor& x : fused) columns.push_back(heads_[0](x));
    return nn::concat_cols(columns);
  }

  const Tensor h0 = cfg_.ablations.no_warmup ? Tensor::zeros(n, hd) : warmup_(spatial[0]);
  std::vector<Tensor> h(lstm_.size(), h0);
  std::vector<Tensor> c(lstm_.size(), Tensor::zeros(n, hd));
  for (std::size_t t = 0; t < steps; ++t) {
    Tensor input = fused[t];
    for (std::size_t l = 0; l < lstm_.size(); ++l) {
      std::tie(h[l], c[l]) = nn::lstm_step(input, h[l], c[l], lstm_[l]);
      input = h[l];
    }
    if (cfg_.head_mode == HeadMode::Multi) columns.push_back(heads_[t](input));
  }
  if (cfg_.head_mode == HeadMode::Single) return heads_[0](h.back());
  return nn::concat_cols(columns);
}

PredictionBlock UrbanGraphModel::predict(const PreparedSequence& seq, TargetVariable variable,
                                         std::string block_id) const {
  PredictionBlock block;
  block.values = forward(seq).to_matrix();
  for (double& v : block.values.values) v = v * scaling.scale + scaling.mean;
  block.variable = variable;
  block.block_id = std::move(block_id);
  return block;
}

}  // namespace ugk
