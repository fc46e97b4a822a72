#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ugk {

enum class ErrorCode {
  MissingLayer,
  DimensionMismatch,
  NegativeHeight,
  UnknownCategory,
  InvalidScene,
  InvalidWeather,
  TooFewBlocks,
  SunBelowHorizon,
  TooFewNodes,
  ShapeMismatch,
  LengthMismatch,
  EmptySplit,
  DivergenceDetected,
  DegenerateVariance,
  ConfigHashMismatch,
  InvalidConfig,
  InvalidArgument,
  Format,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Dense row-major matrix of doubles. Used for feature tables and target
/// grids; the autograd tensor lives in nn/tensor.hpp.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

}  // namespace ugk
