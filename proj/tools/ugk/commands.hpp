#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ugk/config.hpp"

namespace ugk::cli {

struct Options {
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> edge_mask;
  std::optional<std::string> ablate;
  std::optional<std::string> target;
  std::optional<std::string> out;
  std::optional<std::string> data;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> epochs;
  std::optional<std::string> checkpoint;
  /// Which split `predict` and `eval` read: train, val, test or all.
  std::string split = "test";
  bool paper_scale = false;
  bool quiet = false;
};

/// Config file (or defaults) with command-line overrides applied.
RunConfig resolve_config(const Options& opts);

int run_synth(const RunConfig& cfg, const Options& opts);
int run_build_graphs(const RunConfig& cfg, const Options& opts);
int run_train(const RunConfig& cfg, const Options& opts);
int run_eval(const RunConfig& cfg, const Options& opts);
int run_predict(const RunConfig& cfg, const Options& opts);
int run_gradcheck(const RunConfig& cfg, const Options& opts);
int run_flops(const RunConfig& cfg, const Options& opts);
int run_ablate(const RunConfig& cfg, const Options& opts);

}  // namespace ugk::cli
