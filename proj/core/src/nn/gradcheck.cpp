#include "ugk/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "ugk/rng.hpp"

namespace ugk::nn {

namespace {

double relative(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace

GradcheckReport gradcheck(const std::function<Tensor()>& loss, std::vector<NamedParameter> inputs, double step,
                          double floor, double kink_tolerance) {
  for (auto& in : inputs) {
    if (!in.tensor.requires_grad()) throw Error(ErrorCode::InvalidArgument, in.name + " does not require grad");
    in.tensor.zero_grad();
  }
  loss().backward();
  std::vector<std::vector<double>> analytic;
  for (const auto& in : inputs) analytic.emplace_back(in.tensor.grad().begin(), in.tensor.grad().end());

  const double center = loss().item();
  GradcheckReport report;
  for (std::size_t p = 0; p < inputs.size(); ++p) {
    auto values = inputs[p].tensor.mutable_data();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + step;
      const double up = loss().item();
      values[k] = saved - step;
      const double down = loss().item();
      values[k] = saved;

      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[p][k];
      const double abs_err = std::abs(a - numeric);
      const double rel_err = relative(a, numeric, floor);
      ++report.checked;
      // A PReLU input within one step of zero bends the central difference.
      // The analytic value must then agree with the one-sided difference on
      // the side that holds the unperturbed point.
      if (rel_err >= kink_tolerance && (relative(a, (up - center) / step, floor) < kink_tolerance ||
                                        relative(a, (center - down) / step, floor) < kink_tolerance)) {
        ++report.kinks;
        continue;
      }
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      if (rel_err > report.max_rel_error || report.worst.empty()) {
        report.max_rel_error = std::max(report.max_rel_error, rel_err);
        report.worst = inputs[p].name + "[" + std::to_string(k) + "]";
      }
    }
  }
  return report;
}

Tensor random_projection(const Tensor& output, std::uint64_t seed) {
  Rng rng = Rng::named(seed, "gradcheck/projection");
  std::vector<double> w(output.size());
  for (double& x : w) x = rng.uniform(-1.0, 1.0);
  return sum(mul(output, Tensor::from_values(output.rows(), output.cols(), std::move(w))));
}

}  // namespace ugk::nn
