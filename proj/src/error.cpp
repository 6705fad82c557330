#include "seashark/error.hpp"

namespace seashark {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::InvalidDt: return "InvalidDt";
    case ErrorCode::OutOfGrid: return "OutOfGrid";
    case ErrorCode::InvalidTimeout: return "InvalidTimeout";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::RadiusTooTight: return "RadiusTooTight";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::NotAtSurface: return "NotAtSurface";
    case ErrorCode::TimeOrderViolation: return "TimeOrderViolation";
    case ErrorCode::DegenerateDuration: return "DegenerateDuration";
    case ErrorCode::MalformedMessage: return "MalformedMessage";
    case ErrorCode::ReconstructionMissing: return "ReconstructionMissing";
    case ErrorCode::UnknownPlan: return "UnknownPlan";
    case ErrorCode::UnknownMission: return "UnknownMission";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace seashark
