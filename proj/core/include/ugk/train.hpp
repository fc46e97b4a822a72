#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ugk/dataset.hpp"
#include "ugk/metrics.hpp"
#include "ugk/model.hpp"
#include "ugk/nn/checkpoint.hpp"

namespace ugk {

struct HistoryRow {
  std::size_t epoch = 0;
  /// Both in squared target units over valid nodes.
  double train_mse = 0.0;
  double val_mse = 0.0;
  std::optional<double> val_r2;
  /// Rate used during this epoch.
  double lr = 0.0;

  bool operator==(const HistoryRow&) const = default;
};

std::string format_history_csv(std::span<const HistoryRow> history, std::string_view config_hash);

struct TrainOptions {
  /// Called after every epoch, e.g. for progress output.
  std::function<void(const HistoryRow&)> on_epoch;
};

struct TrainResult {
  std::vector<HistoryRow> history;
  std::size_t best_epoch = 0;
  double best_val_mse = 0.0;
  bool stopped_early = false;
};

/// Mean and standard deviation of the valid training targets over the first
/// `hours` steps; a zero deviation is replaced by 1.
TargetScaling fit_target_scaling(std::span<const BlockData> blocks, std::size_t hours);

/// Trains in place and leaves the model holding the best-validation
/// parameters. Single-threaded and fully determined by the model seed.
TrainResult train_model(UrbanGraphModel& model, std::span<const BlockData> train, std::span<const BlockData> val,
                        const TrainOptions& options = {});

/// Predictions (target units) for every block, in order.
std::vector<PredictionBlock> predict_blocks(const UrbanGraphModel& model, std::span<const BlockData> blocks);

MetricsReport evaluate_model(const UrbanGraphModel& model, std::span<const BlockData> blocks);

}  // namespace ugk
