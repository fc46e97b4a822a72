#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ugk/graph.hpp"
#include "ugk/nn/layers.hpp"

namespace ugk {

enum class HeadMode { Single, Multi };

std::string_view head_mode_name(HeadMode m);
HeadMode parse_head_mode(std::string_view text);

struct Ablations {
  bool static_graph = false;
  bool homogeneous = false;
  /// Relations removed from every graph.
  RelationMask edge_mask;
  bool no_warmup = false;
  bool single_hour = false;

  bool any() const { return static_graph || homogeneous || edge_mask.any() || no_warmup || single_hour; }
};

/// Parses "homogeneous", "static_graph", "no_warmup", "single_hour" or
/// "drop:<relation>[,<relation>...]" (an empty list is the identity variant).
Ablations parse_ablation(std::string_view variant);

struct ModelConfig {
  std::size_t node_dim = 16;
  std::size_t hidden_dim = 128;
  std::size_t rgcn_layers = 3;
  std::size_t lstm_layers = 1;
  HeadMode head_mode = HeadMode::Single;
  std::size_t t_pred = 12;
  std::uint64_t seed = 0;
  bool use_edge_weights = false;

  double lr = 1e-3;
  std::size_t batch_size = 8;
  double weight_decay = 1e-5;
  double plateau_factor = 0.5;
  std::size_t plateau_patience = 5;
  std::size_t early_stop_patience = 15;
  std::size_t max_epochs = 200;

  Ablations ablations;

  void validate() const;
  std::string canonical() const;
  std::size_t num_relations() const { return ablations.homogeneous ? 1 : kNumRelations; }
};

inline constexpr std::size_t kEnvDim = 6;
inline constexpr std::size_t kTimeDim = 2;

struct ContextFeatures {
  /// [ghi / 1000, wind speed / 10, sin(wind dir), cos(wind dir), (air temp - 30) / 10, rh / 100]
  std::array<double, kEnvDim> env{};
  /// [sin, cos] of 2 pi clock / 24.
  std::array<double, kTimeDim> time{};
};

ContextFeatures context_features(const WeatherRecord& weather);

/// Model-ready view of one block sequence: ablation transforms already
/// applied, adjacency normalised.
struct PreparedSequence {
  std::size_t num_nodes = 0;
  nn::Tensor node_features;  // |V| x node_dim, constant
  std::vector<nn::RelationAdjacency> adjacency;
  std::vector<ContextFeatures> context;
};

/// Applies the graph-side ablations (static_graph, edge_mask, homogeneous) of
/// `cfg` and normalises each step's adjacency.
PreparedSequence prepare_sequence(std::span<const HeteroGraph> graphs, std::span<const WeatherRecord> weather,
                                  const Matrix& node_features, const ModelConfig& cfg);

struct PredictionBlock {
  Matrix values;  // |V| x t_pred
  TargetVariable variable = TargetVariable::UTCI;
  std::string block_id;
};

struct TargetScaling {
  double mean = 0.0;
  double scale = 1.0;
};

class UrbanGraphModel {
 public:
  explicit UrbanGraphModel(ModelConfig cfg);
  UrbanGraphModel(const UrbanGraphModel&) = delete;
  UrbanGraphModel& operator=(const UrbanGraphModel&) = delete;

  const ModelConfig& config() const { return cfg_; }
  nn::ParameterSet& parameters() { return params_; }
  const nn::ParameterSet& parameters() const { return params_; }

  std::pair<nn::Tensor, nn::Tensor> encode_context(const ContextFeatures& context) const;

  /// Standardised-target predictions, |V| x t_pred.
  nn::Tensor forward(const PreparedSequence& seq) const;

  /// forward() mapped back to target units.
  PredictionBlock predict(const PreparedSequence& seq, TargetVariable variable, std::string block_id) const;

  TargetScaling scaling;

  const std::vector<nn::RgcnLayerParams>& rgcn_layers() const { return rgcn_; }

 private:
  nn::Tensor rgcn_stack(const nn::Tensor& x, const nn::RelationAdjacency& adjacency) const;

  ModelConfig cfg_;
  nn::ParameterSet params_;
  nn::Mlp2 env_encoder_;
  nn::Mlp2 time_encoder_;
  std::vector<nn::RgcnLayerParams> rgcn_;
  nn::Mlp2 fusion_;
  nn::Mlp2 warmup_;
  std::vector<nn::LstmParams> lstm_;
  std::vector<nn::Mlp2> heads_;
};

}  // namespace ugk
