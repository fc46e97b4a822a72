#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ugk/model.hpp"

namespace ugk {

/// Mean per-step edge count of each relation over a sequence.
struct GraphStats {
  std::size_t num_nodes = 0;
  std::array<double, kNumRelations> edges_per_step{};
};

GraphStats graph_stats(std::span<const HeteroGraph> graphs);

/// Edge counts of the input graphs after the ablation transforms of `cfg`
/// (dropped relations removed; merged relations de-duplicated).
GraphStats graph_stats(std::span<const HeteroGraph> graphs, const ModelConfig& cfg);

struct FlopTerm {
  std::string name;
  double macs = 0.0;
};

/// Multiply-accumulate counts of one forward pass over one block sequence.
/// `flops` is 2 * macs: one multiply plus one add per accumulation.
struct FlopReport {
  std::vector<FlopTerm> terms;
  double macs = 0.0;
  double flops = 0.0;

  double term(std::string_view name) const;
};

/// 2 * batch * in * out.
double linear_flops(double batch, double in, double out);

/// Counts every dense product and every sparse aggregation the forward pass
/// performs. Elementwise work (activations, gates, bias adds) is omitted.
FlopReport count_flops(const ModelConfig& cfg, const GraphStats& stats);

}  // namespace ugk
