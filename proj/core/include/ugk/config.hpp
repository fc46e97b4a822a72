#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ugk/graph.hpp"
#include "ugk/model.hpp"
#include "ugk/synthetic.hpp"

namespace ugk {

/// Everything a pipeline run depends on. Loaded from JSON, e.g.
///
///   {"data_dir": "data", "out_dir": "out", "target": "UTCI", "seed": 7,
///    "graph": {"k_similarity": 8}, "model": {"hidden_dim": 32},
///    "synthetic": {"blocks": 16}}
///
/// Every section and key is optional; unknown keys are rejected.
struct RunConfig {
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "out";
  TargetVariable target = TargetVariable::UTCI;
  /// Drives the split, initialisation, shuffling and synthetic data.
  std::uint64_t seed = 0;
  /// 0 means default_threads().
  std::size_t threads = 0;
  GraphConfig graph;
  ModelConfig model;
  SyntheticSpec synthetic;

  /// Pushes `seed` and the graph config into the nested configs and validates.
  void finalize();
  /// Hash of every field that influences results (paths and threads excluded).
  std::string hash() const;
  std::size_t resolved_threads() const;
};

RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Canonical JSON rendering (round-trips through parse_run_config).
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace ugk
