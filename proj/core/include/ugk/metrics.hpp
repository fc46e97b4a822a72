#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ugk/model.hpp"

namespace ugk {

struct ErrorMetrics {
  std::size_t count = 0;
  double mae = 0.0;
  double rmse = 0.0;
  /// Absent when the truth has zero variance.
  std::optional<double> r2;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  double truth_mean = 0.0;
};

struct MetricsReport {
  ErrorMetrics overall;
  std::vector<ErrorMetrics> per_hour;
};

/// R² of `m`, or Error(DegenerateVariance) when it is undefined.
double require_r2(const ErrorMetrics& m);

/// Collects (prediction, truth) pairs over valid nodes from any number of
/// blocks; metrics are computed in two passes at report() time.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(std::size_t hours);

  /// `pred` is |V| x hours; rows with valid_mask == 0 are ignored.
  void add(const Matrix& pred, const TargetField& truth);
  MetricsReport report() const;
  std::size_t hours() const { return hours_; }

 private:
  std::size_t hours_;
  // Node-major, in insertion order.
  std::vector<double> pred_, truth_;
};

MetricsReport compute_metrics(const PredictionBlock& pred, const TargetField& truth);

/// Combines per-hour metrics into overall ones through the pooled sums of
/// squares: SS_tot = sum_h [SS_tot_h + n_h (mean_h - mean)^2].
ErrorMetrics pool_hours(std::span<const ErrorMetrics> per_hour);

/// "metric,value" rows for the overall report and "hour,count,mae,rmse,r2"
/// rows for the hourly table, both preceded by a "# config_hash=" line.
std::string format_metrics_csv(const MetricsReport& report, std::string_view config_hash);
std::string format_per_hour_csv(const MetricsReport& report, std::string_view config_hash);

}  // namespace ugk
