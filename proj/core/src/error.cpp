#include "scenechain/error.hpp"

namespace scenechain {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::UnknownRoomType: return "UnknownRoomType";
    case ErrorCode::UnknownCategoryNoFallback: return "UnknownCategoryNoFallback";
    case ErrorCode::ReplayFailure: return "ReplayFailure";
    case ErrorCode::SceneRejected: return "SceneRejected";
    case ErrorCode::JudgeUnavailable: return "JudgeUnavailable";
    case ErrorCode::PolicyTransport: return "PolicyTransport";
    case ErrorCode::JudgeTransport: return "JudgeTransport";
    case ErrorCode::NonConformingResponse: return "NonConformingResponse";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace scenechain
