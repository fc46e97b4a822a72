#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ugk/nn/layers.hpp"

namespace ugk::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// Decoupled: theta <- theta - lr * weight_decay * theta before the moment step.
  double weight_decay = 1e-5;
};

struct AdamState {
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

/// One Adam update of a single parameter buffer. `step` is the 1-based count
/// after this update.
void adam_update(std::span<double> theta, std::span<const double> grad, std::vector<double>& m,
                 std::vector<double>& v, std::uint64_t step, double lr, const AdamConfig& cfg);

class Adam {
 public:
  Adam(ParameterSet& params, AdamConfig cfg = {});

  /// Applies the accumulated gradients of every parameter.
  void step(double lr);

  const AdamConfig& config() const { return cfg_; }
  const AdamState& state() const { return state_; }
  void set_state(AdamState state);

 private:
  ParameterSet* params_;
  AdamConfig cfg_;
  AdamState state_;
};

/// Multiplies the rate by `factor` once the metric has failed to improve
/// strictly for more than `patience` consecutive epochs.
class ReduceLrOnPlateau {
 public:
  ReduceLrOnPlateau(double initial_lr, double factor = 0.5, std::size_t patience = 5, double min_lr = 0.0);

  /// Feeds one epoch's metric; returns the rate for the next epoch.
  double step(double metric);
  double lr() const { return lr_; }
  std::size_t reductions() const { return reductions_; }

 private:
  double lr_;
  double factor_;
  std::size_t patience_;
  double min_lr_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs_ = 0;
  std::size_t reductions_ = 0;
};

class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience = 15) : patience_(patience) {}

  /// Returns true when the metric is a new strict best.
  bool update(double metric);
  bool should_stop() const { return bad_epochs_ >= patience_; }
  double best() const { return best_; }

 private:
  std::size_t patience_;
  double best_ = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs_ = 0;
};

}  // namespace ugk::nn
