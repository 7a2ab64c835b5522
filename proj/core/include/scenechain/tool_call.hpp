#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scenechain/scene.hpp"

namespace scenechain {

struct AddObject {
  std::string object_description;
  Vec3 position;
  Quat rotation{0.0, 0.0, 0.0, 1.0};
  Vec3 size;
  // Optional extension: requested uid. Used by replayed datasets so that
  // re-instantiated objects keep their identity.
  std::optional<std::string> uid;

  friend bool operator==(const AddObject&, const AddObject&) = default;
};

struct RemoveObject {
  std::string uid;
  friend bool operator==(const RemoveObject&, const RemoveObject&) = default;
};

struct MoveObject {
  std::string uid;
  Vec3 new_position;
  friend bool operator==(const MoveObject&, const MoveObject&) = default;
};

struct RotateObject {
  std::string uid;
  Quat new_rotation{0.0, 0.0, 0.0, 1.0};
  friend bool operator==(const RotateObject&, const RotateObject&) = default;
};

struct ScaleObject {
  std::string uid;
  Vec3 new_size;
  friend bool operator==(const ScaleObject&, const ScaleObject&) = default;
};

struct ReplaceObject {
  std::string uid_to_replace;
  std::string new_object_description;
  friend bool operator==(const ReplaceObject&, const ReplaceObject&) = default;
};

struct Terminate {
  std::string reason;
  friend bool operator==(const Terminate&, const Terminate&) = default;
};

using ToolPayload =
    std::variant<AddObject, RemoveObject, MoveObject, RotateObject, ScaleObject, ReplaceObject, Terminate>;

struct ToolCall {
  std::string id;
  ToolPayload payload;

  std::string_view name() const;
  bool is_terminate() const { return std::holds_alternative<Terminate>(payload); }

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

enum class PenaltyKind { MissingParams, InvalidId, TagOrder, JsonParse };

// 0.1 / 0.2 / 0.8 / 0.9
double penalty_weight(PenaltyKind kind);
std::string_view penalty_name(PenaltyKind kind);
PenaltyKind penalty_from_name(std::string_view name);

struct FormatPenalty {
  PenaltyKind kind;
  std::string detail;

  double weight() const { return penalty_weight(kind); }
  friend bool operator==(const FormatPenalty&, const FormatPenalty&) = default;
};

Json penalty_to_json(const FormatPenalty& p);
FormatPenalty penalty_from_json(const Json& j);

Json tool_call_to_json(const ToolCall& call);

// Decodes one {"id","name","arguments"} entry. Returns nullopt and appends a
// MissingParams penalty when the entry is incomplete or malformed.
std::optional<ToolCall> tool_call_from_json(const Json& j, std::size_t position,
                                            std::vector<FormatPenalty>& penalties,
                                            std::vector<std::string>* warnings = nullptr);

// Strict decoding for trusted files (datasets); throws on any defect.
ToolCall tool_call_from_json_strict(const Json& j);

}  // namespace scenechain
