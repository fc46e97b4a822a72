#pragma once

#include <string>
#include <vector>

#include "ugk/nn/gradcheck.hpp"

namespace ugk::cli {

inline constexpr double kGradcheckTolerance = 1e-4;

struct GradcheckCase {
  std::string name;
  nn::GradcheckReport report;
};

/// Gradient checks for each layer type and one end-to-end pass of a tiny model.
std::vector<GradcheckCase> run_gradcheck_suite(std::uint64_t seed);

}  // namespace ugk::cli
