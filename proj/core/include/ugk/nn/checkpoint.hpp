#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ugk/nn/optim.hpp"

namespace ugk::nn {

struct StoredArray {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  bool operator==(const StoredArray&) const = default;
};

struct CheckpointData {
  std::string config_hash;
  std::string graph_hash;
  double target_mean = 0.0;
  double target_scale = 1.0;
  std::vector<StoredArray> parameters;
  /// Empty m/v when no optimizer state was saved.
  AdamState adam;
};

// Binary layout, all integers and reals little-endian:
//   "UGK1"
//   u32 len + config hash, u32 len + graph hash, f64 target mean, f64 target scale
//   u32 count, then per parameter: u32 len + name, u32 rows, u32 cols
//   f64 payload of every parameter in table order
//   u64 adam step, u8 has_moments, then m payload and v payload in table order
std::string encode_checkpoint(const CheckpointData& data);
CheckpointData decode_checkpoint(std::string_view bytes);

void write_checkpoint(const std::filesystem::path& path, const CheckpointData& data);
CheckpointData read_checkpoint(const std::filesystem::path& path);

/// Parameter values (and optimizer state if given) in registration order.
CheckpointData capture_checkpoint(const ParameterSet& params, const Adam* adam);

/// Copies stored values into `params`; names and shapes must match the set
/// exactly (ShapeMismatch otherwise).
void load_parameters(ParameterSet& params, const CheckpointData& data);

}  // namespace ugk::nn
