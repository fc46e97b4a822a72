#include "ugk/flops.hpp"

namespace ugk {

GraphStats graph_stats(std::span<const HeteroGraph> graphs) {
  GraphStats s;
  if (graphs.empty()) return s;
  s.num_nodes = graphs[0].num_nodes;
  for (const auto& g : graphs) {
    for (std::size_t r = 0; r < kNumRelations; ++r) {
      s.edges_per_step[r] += static_cast<double>(g.num_edges(static_cast<RelationKind>(r)));
    }
  }
  for (double& e : s.edges_per_step) e /= static_cast<double>(graphs.size());
  return s;
}

GraphStats graph_stats(std::span<const HeteroGraph> graphs, const ModelConfig& cfg) {
  std::vector<HeteroGraph> transformed;
  for (std::size_t t = 0; t < graphs.size(); ++t) {
    const HeteroGraph& source = cfg.ablations.static_graph ? graphs[0] : graphs[t];
    HeteroGraph g = cfg.ablations.edge_mask.any() ? drop_relations(source, cfg.ablations.edge_mask) : source;
    if (cfg.ablations.homogeneous) g = merge_relations(g);
    transformed.push_back(std::move(g));
  }
  return graph_stats(transformed);
}

double FlopReport::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t.macs;
  }
  return 0.0;
}

double linear_flops(double batch, double in, double out) { return 2.0 * batch * in * out; }

FlopReport count_flops(const ModelConfig& cfg, const GraphStats& stats) {
  cfg.validate();
  const double n = static_cast<double>(stats.num_nodes);
  const double h = static_cast<double>(cfg.hidden_dim);
  const double steps = static_cast<double>(cfg.t_pred);
  FlopReport report;
  auto add = [&](std::string name, double macs) { report.terms.push_back({std::move(name), macs}); };

  add("env_encoder", steps * (static_cast<double>(kEnvDim) * h + h * h));
  add("time_encoder", steps * (static_cast<double>(kTimeDim) * h + h * h));

  for (std::size_t l = 0; l < cfg.rgcn_layers; ++l) {
    const double din = l == 0 ? static_cast<double>(cfg.node_dim) : h;
    const std::string prefix = "rgcn" + std::to_string(l);
    add(prefix + ".self", steps * n * din * h);
    for (std::size_t r = 0; r < cfg.num_relations(); ++r) {
      const double edges = stats.edges_per_step[r];
      if (edges <= 0.0) continue;
      const std::string rel = prefix + "." + std::string(relation_name(static_cast<RelationKind>(r)));
      add(rel + ".aggregate", steps * edges * din);
      add(rel + ".transform", steps * n * din * h);
    }
  }

  add("fusion", steps * n * (3.0 * h * h + h * h));
  const double t_out = static_cast<double>(cfg.t_pred);
  if (cfg.ablations.single_hour) {
    add("head", steps * n * (h * h + h));
  } else {
    if (!cfg.ablations.no_warmup) add("warmup", n * 2.0 * h * h);
    for (std::size_t l = 0; l < cfg.lstm_layers; ++l) {
      add("lstm" + std::to_string(l), steps * n * (h * 4.0 * h + h * 4.0 * h));
    }
    if (cfg.head_mode == HeadMode::Single) {
      add("head", n * (h * h + h * t_out));
    } else {
      add("head", steps * n * (h * h + h));
    }
  }
  for (const auto& t : report.terms) report.macs += t.macs;
  report.flops = 2.0 * report.macs;
  return report;
}

}  // namespace ugk
