#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xplain {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotPositiveSemidefinite,
  FactorizationFailure,
  InvalidCount,
  TooFewSamples,
  InvalidFloor,
  DimensionTooLarge,
  SingularSystem,
  MalformedHeader,
  NonNumericCell,
  RaggedRow,
  IoFailure,
  UnsupportedFormat,
  CorruptFile,
  GeometryTooLarge,
  ConfigError,
};

/// Coarse grouping used by the CLI to pick an exit status.
enum class ErrorCategory { Usage, Data, Solver };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace xplain
