#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace supersal {

enum class ErrorCode {
  MalformedRow,
  UnknownLabel,
  NonMonotoneTime,
  BadMagic,
  TruncatedFile,
  NegativeValue,
  InconsistentFrameSize,
  AllZero,
  FrameOutOfRange,
  EmptyLocations,
  NoDonorClips,
  EmptyScoreSet,
  ZeroVariance,
  TooFewObservers,
  ZeroTotalWeight,
  TooFewClips,
  EmptySample,
  InconsistentMetricSets,
  NegativeSamplingExhausted,
  EmptyClip,
  ShapeMismatch,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` lets callers
// branch on the failure category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace supersal
