#include "ugk/common.hpp"

namespace ugk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingLayer: return "MissingLayer";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeHeight: return "NegativeHeight";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::InvalidScene: return "InvalidScene";
    case ErrorCode::InvalidWeather: return "InvalidWeather";
    case ErrorCode::TooFewBlocks: return "TooFewBlocks";
    case ErrorCode::SunBelowHorizon: return "SunBelowHorizon";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::ConfigHashMismatch: return "ConfigHashMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace ugk
