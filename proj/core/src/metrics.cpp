#include "ugk/metrics.hpp"

#include <cmath>

#include "ugk/csv.hpp"

namespace ugk {
namespace {

ErrorMetrics two_pass(std::span<const double> pred, std::span<const double> truth, std::size_t offset,
                      std::size_t stride) {
  ErrorMetrics m;
  double sum = 0.0;
  for (std::size_t i = offset; i < truth.size(); i += stride) {
    sum += truth[i];
    ++m.count;
  }
  if (m.count == 0) return m;
  const double n = static_cast<double>(m.count);
  m.truth_mean = sum / n;
  double abs_sum = 0.0;
  for (std::size_t i = offset; i < truth.size(); i += stride) {
    const double e = truth[i] - pred[i];
    const double d = truth[i] - m.truth_mean;
    abs_sum += std::abs(e);
    m.ss_res += e * e;
    m.ss_tot += d * d;
  }
  m.mae = abs_sum / n;
  m.rmse = std::sqrt(m.ss_res / n);
  if (m.ss_tot > 0.0) m.r2 = 1.0 - m.ss_res / m.ss_tot;
  return m;
}

}  // namespace

double require_r2(const ErrorMetrics& m) {
  if (!m.r2) throw Error(ErrorCode::DegenerateVariance, "R² undefined: truth has zero variance");
  return *m.r2;
}

MetricsAccumulator::MetricsAccumulator(std::size_t hours) : hours_(hours) {
  if (hours == 0) throw Error(ErrorCode::InvalidArgument, "metrics need at least one hour");
}

void MetricsAccumulator::add(const Matrix& pred, const TargetField& truth) {
  if (pred.rows != truth.num_nodes || pred.cols != hours_ || truth.num_hours < hours_ ||
      truth.valid_mask.size() != truth.num_nodes) {
    throw Error(ErrorCode::ShapeMismatch, "prediction and truth shapes differ");
  }
  for (std::size_t v = 0; v < truth.num_nodes; ++v) {
    if (!truth.valid_mask[v]) continue;
    for (std::size_t h = 0; h < hours_; ++h) {
      pred_.push_back(pred(v, h));
      truth_.push_back(truth.at(v, h));
    }
  }
}

MetricsReport MetricsAccumulator::report() const {
  MetricsReport r;
  r.overall = two_pass(pred_, truth_, 0, 1);
  for (std::size_t h = 0; h < hours_; ++h) r.per_hour.push_back(two_pass(pred_, truth_, h, hours_));
  return r;
}

MetricsReport compute_metrics(const PredictionBlock& pred, const TargetField& truth) {
  MetricsAccumulator acc(pred.values.cols);
  acc.add(pred.values, truth);
  return acc.report();
}

ErrorMetrics pool_hours(std::span<const ErrorMetrics> per_hour) {
  ErrorMetrics m;
  double weighted_mean = 0.0, abs_sum = 0.0;
  for (const auto& h : per_hour) {
    m.count += h.count;
    weighted_mean += h.truth_mean * static_cast<double>(h.count);
    abs_sum += h.mae * static_cast<double>(h.count);
    m.ss_res += h.ss_res;
  }
  if (m.count == 0) return m;
  const double n = static_cast<double>(m.count);
  m.truth_mean = weighted_mean / n;
  for (const auto& h : per_hour) {
    const double d = h.truth_mean - m.truth_mean;
    m.ss_tot += h.ss_tot + static_cast<double>(h.count) * d * d;
  }
  m.mae = abs_sum / n;
  m.rmse = std::sqrt(m.ss_res / n);
  if (m.ss_tot > 0.0) m.r2 = 1.0 - m.ss_res / m.ss_tot;
  return m;
}

namespace {

std::string r2_text(const ErrorMetrics& m) { return m.r2 ? format_double(*m.r2) : "nan"; }

}  // namespace

std::string format_metrics_csv(const MetricsReport& report, std::string_view config_hash) {
  std::string s = "# config_hash=" + std::string(config_hash) + "\nmetric,value\n";
  s += "count," + std::to_string(report.overall.count) + "\n";
  s += "mae," + format_double(report.overall.mae) + "\n";
  s += "rmse," + format_double(report.overall.rmse) + "\n";
  s += "r2," + r2_text(report.overall) + "\n";
  return s;
}

std::string format_per_hour_csv(const MetricsReport& report, std::string_view config_hash) {
  std::string s = "# config_hash=" + std::string(config_hash) + "\nhour,count,mae,rmse,r2\n";
  for (std::size_t h = 0; h < report.per_hour.size(); ++h) {
    const auto& m = report.per_hour[h];
    s += std::to_string(h) + "," + std::to_string(m.count) + "," + format_double(m.mae) + "," +
         format_double(m.rmse) + "," + r2_text(m) + "\n";
  }
  return s;
}

}  // namespace ugk
