#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ugk/nn/layers.hpp"

namespace ugk::nn {

struct GradcheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
  /// Entries where the function is not smooth within one step; they are
  /// verified against a one-sided difference and left out of the maxima.
  std::size_t kinks = 0;
  /// "<name>[<flat index>]" of the worst relative error.
  std::string worst;

  bool passed(double tolerance) const { return max_rel_error < tolerance; }
};

/// Compares the backward pass of `loss` (which must rebuild its graph from
/// the current leaf values on each call and return a 1x1 tensor) against
/// central differences for every scalar of every input. Relative error is
/// |a - n| / max(|a|, |n|, floor).
GradcheckReport gradcheck(const std::function<Tensor()>& loss, std::vector<NamedParameter> inputs,
                          double step = 1e-5, double floor = 1e-6, double kink_tolerance = 1e-4);

/// Fixed pseudo-random weighting so a tensor-valued output becomes a scalar
/// whose gradient exercises every output entry differently.
Tensor random_projection(const Tensor& output, std::uint64_t seed);

}  // namespace ugk::nn
