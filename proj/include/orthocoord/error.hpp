#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orthocoord {

enum class ErrorKind {
  InvalidDimension,
  DimensionMismatch,
  DegenerateMetric,
  MissingSecondDerivatives,
  GridTooCoarse,
  OutOfDomain,
  FrameError,
  ConstructionFailed,
  OrientationError,
  PreconditionViolated,
  DegeneratePair,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::DimensionMismatch: return "dimension-error";
    case ErrorKind::DegenerateMetric: return "degenerate-metric";
    case ErrorKind::MissingSecondDerivatives: return "missing-second-derivatives";
    case ErrorKind::GridTooCoarse: return "grid-too-coarse";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::FrameError: return "frame-error";
    case ErrorKind::ConstructionFailed: return "construction-failed";
    case ErrorKind::OrientationError: return "orientation-error";
    case ErrorKind::PreconditionViolated: return "precondition-violated";
    case ErrorKind::DegeneratePair: return "degenerate-pair";
    case ErrorKind::ParseError: return "parse-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace orthocoord
