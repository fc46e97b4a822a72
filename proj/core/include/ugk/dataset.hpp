#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ugk/graph.hpp"

namespace ugk {

/// Everything the model needs for one block, loaded and graph-built.
struct BlockData {
  std::string block_id;
  GridScene scene;
  std::vector<WeatherRecord> weather;
  /// Normalised static features with neighbour means appended, |V| x 16.
  Matrix node_features;
  std::vector<HeteroGraph> graphs;
  TargetField target;
};

// Dataset layout: <root>/blocks/<block_id>/ holding the scene layers,
// weather.csv and targets/<VAR>/hHH.csv.

std::filesystem::path block_directory(const std::filesystem::path& root, const std::string& block_id);

/// Block ids (sub-directory names of <root>/blocks), sorted.
std::vector<std::string> list_blocks(const std::filesystem::path& root);

Matrix block_node_features(const GridScene& scene, double eps = 1e-6);

/// Stable hash over a block's scene, weather and the graph config; names the
/// cache directory and is stored in checkpoints.
std::string graph_hash(const GridScene& scene, std::span<const WeatherRecord> weather, const GraphConfig& cfg);

/// Hash over the graph hashes of a sequence of blocks, in order.
std::string combine_hashes(std::span<const std::string> hashes);

struct GraphCacheResult {
  std::vector<HeteroGraph> graphs;
  std::string hash;
  std::filesystem::path directory;
  bool hit = false;
};

/// Reads <cache_root>/<hash>/tHH.csv when complete, else builds the sequence
/// (k-NN over the 8 static feature columns) and writes it there.
GraphCacheResult load_or_build_graphs(const std::filesystem::path& cache_root, const GridScene& scene,
                                      const Matrix& static_features, std::span<const WeatherRecord> weather,
                                      const GraphConfig& cfg, std::size_t threads);

struct BlockLoadOptions {
  TargetVariable variable = TargetVariable::UTCI;
  GraphConfig graph;
  std::size_t threads = 1;
  /// Graph cache root; graphs are built in memory when unset.
  std::optional<std::filesystem::path> cache_root;
  /// Skip reading targets (prediction on unlabelled blocks).
  bool load_targets = true;
};

BlockData load_block(const std::filesystem::path& root, const std::string& block_id, const BlockLoadOptions& opts);

}  // namespace ugk
