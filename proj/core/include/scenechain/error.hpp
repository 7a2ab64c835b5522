#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scenechain {

enum class ErrorCode {
  MalformedJson,
  MissingField,
  InvariantViolation,
  DegeneratePolygon,
  EmptyInput,
  EmptyScene,
  EmptyTrajectory,
  UnknownRoomType,
  UnknownCategoryNoFallback,
  ReplayFailure,
  SceneRejected,
  JudgeUnavailable,
  PolicyTransport,
  JudgeTransport,
  NonConformingResponse,
  InvalidConfig,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// All domain failures surface as this exception; the code is stable and
// machine-readable, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace scenechain
