#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seashark {

/// Machine-readable failure codes shared by every module and the wire protocol.
enum class ErrorCode {
  DegenerateSegment,
  InvalidDt,
  OutOfGrid,
  InvalidTimeout,
  InvalidParams,
  RadiusTooTight,
  InvalidPlan,
  NotAtSurface,
  TimeOrderViolation,
  DegenerateDuration,
  MalformedMessage,
  ReconstructionMissing,
  UnknownPlan,
  UnknownMission,
  InvalidState,
  ValidationFailed,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seashark
