#include "xplain/error.hpp"

namespace xplain {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidFloor: return "InvalidFloor";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::GeometryTooLarge: return "GeometryTooLarge";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidFloor:
    case ErrorCode::ConfigError:
      return ErrorCategory::Usage;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotPositiveSemidefinite:
    case ErrorCode::InvalidCount:
    case ErrorCode::MalformedHeader:
    case ErrorCode::NonNumericCell:
    case ErrorCode::RaggedRow:
    case ErrorCode::IoFailure:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::CorruptFile:
    case ErrorCode::GeometryTooLarge:
      return ErrorCategory::Data;
    case ErrorCode::FactorizationFailure:
    case ErrorCode::TooFewSamples:
    case ErrorCode::DimensionTooLarge:
    case ErrorCode::SingularSystem:
      return ErrorCategory::Solver;
  }
  return ErrorCategory::Solver;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace xplain
