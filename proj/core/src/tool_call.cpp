#include "scenechain/tool_call.hpp"

#include <cmath>

#include "scenechain/error.hpp"

namespace scenechain {

std::string_view ToolCall::name() const {
  struct Visitor {
    std::string_view operator()(const AddObject&) const { return "add_object"; }
    std::string_view operator()(const RemoveObject&) const { return "remove_object"; }
    std::string_view operator()(const MoveObject&) const { return "move_object"; }
    std::string_view operator()(const RotateObject&) const { return "rotate_object"; }
    std::string_view operator()(const ScaleObject&) const { return "scale_object"; }
    std::string_view operator()(const ReplaceObject&) const { return "replace_object"; }
    std::string_view operator()(const Terminate&) const { return "terminate"; }
  };
  return std::visit(Visitor{}, payload);
}

double penalty_weight(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::MissingParams: return 0.1;
    case PenaltyKind::InvalidId: return 0.2;
    case PenaltyKind::TagOrder: return 0.8;
    case PenaltyKind::JsonParse: return 0.9;
  }
  return 0.0;
}

std::string_view penalty_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::MissingParams: return "MissingParams";
    case PenaltyKind::InvalidId: return "InvalidId";
    case PenaltyKind::TagOrder: return "TagOrder";
    case PenaltyKind::JsonParse: return "JsonParse";
  }
  return "";
}

PenaltyKind penalty_from_name(std::string_view name) {
  for (auto k : {PenaltyKind::MissingParams, PenaltyKind::InvalidId, PenaltyKind::TagOrder,
                 PenaltyKind::JsonParse}) {
    if (penalty_name(k) == name) return k;
  }
  throw Error(ErrorCode::InvariantViolation, "unknown penalty kind " + std::string(name));
}

Json penalty_to_json(const FormatPenalty& p) {
  Json j = Json::object();
  j["kind"] = penalty_name(p.kind);
  j["weight"] = p.weight();
  j["detail"] = p.detail;
  return j;
}

FormatPenalty penalty_from_json(const Json& j) {
  return {penalty_from_name(j.at("kind").get<std::string>()), j.value("detail", std::string{})};
}

Json tool_call_to_json(const ToolCall& call) {
  Json args = Json::object();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AddObject>) {
          args["object_description"] = p.object_description;
          args["position"] = vec3_to_json(p.position);
          args["rotation"] = quat_to_json(p.rotation);
          args["size"] = vec3_to_json(p.size);
          if (p.uid) args["uid"] = *p.uid;
        } else if constexpr (std::is_same_v<T, RemoveObject>) {
          args["uid"] = p.uid;
        } else if constexpr (std::is_same_v<T, MoveObject>) {
          args["uid"] = p.uid;
          args["new_position"] = vec3_to_json(p.new_position);
        } else if constexpr (std::is_same_v<T, RotateObject>) {
          args["uid"] = p.uid;
          args["new_rotation"] = quat_to_json(p.new_rotation);
        } else if constexpr (std::is_same_v<T, ScaleObject>) {
          args["uid"] = p.uid;
          args["new_size"] = vec3_to_json(p.new_size);
        } else if constexpr (std::is_same_v<T, ReplaceObject>) {
          args["uid_to_replace"] = p.uid_to_replace;
          args["new_object_description"] = p.new_object_description;
        } else {
          args["reason"] = p.reason;
        }
      },
      call.payload);
  Json j = Json::object();
  j["id"] = call.id;
  j["name"] = call.name();
  j["arguments"] = std::move(args);
  return j;
}

namespace {

struct ArgError {
  std::string what;
};

const Json& arg(const Json& args, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = args.find(k);
    if (it != args.end()) return *it;
  }
  throw ArgError{std::string("missing argument '") + *keys.begin() + "'"};
}

std::string str_arg(const Json& args, std::initializer_list<const char*> keys) {
  const Json& v = arg(args, keys);
  if (!v.is_string()) throw ArgError{std::string("argument '") + *keys.begin() + "' must be a string"};
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& v, std::size_t n, const char* key) {
  if (!v.is_array() || v.size() != n) {
    throw ArgError{std::string("argument '") + key + "' must be an array of " + std::to_string(n) + " numbers"};
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      throw ArgError{std::string("argument '") + key + "' must hold finite numbers"};
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Vec3 vec_arg(const Json& args, const char* key) {
  const auto v = numbers(arg(args, {key}), 3, key);
  return quantize6(Vec3{v[0], v[1], v[2]});
}

Vec3 size_arg(const Json& args, const char* key) {
  const Vec3 s = vec_arg(args, key);
  if (!(s.x > 0.0 && s.y > 0.0 && s.z > 0.0)) throw ArgError{std::string("argument '") + key + "' must be positive"};
  return s;
}

Quat rot_arg(const Json& args, const char* key, std::vector<std::string>* warnings) {
  const auto v = numbers(arg(args, {key}), 4, key);
  try {
    const RotationCheck rc = canonical_rotation({v[0], v[1], v[2], v[3]});
    if (rc.projected && warnings) warnings->push_back(std::string(key) + " projected onto yaw-only rotation");
    return rc.rotation;
  } catch (const Error& e) {
    throw ArgError{e.what()};
  }
}

ToolPayload decode_payload(std::string_view name, const Json& args, std::vector<std::string>* warnings) {
  if (name == "add_object") {
    AddObject a;
    a.object_description = str_arg(args, {"object_description"});
    a.position = vec_arg(args, "position");
    a.rotation = rot_arg(args, "rotation", warnings);
    a.size = size_arg(args, "size");
    if (args.contains("uid")) a.uid = str_arg(args, {"uid"});
    return a;
  }
  if (name == "remove_object") return RemoveObject{str_arg(args, {"uid", "jid", "jid/uid"})};
  if (name == "move_object") {
    return MoveObject{str_arg(args, {"uid", "jid", "jid/uid"}), vec_arg(args, "new_position")};
  }
  if (name == "rotate_object") {
    return RotateObject{str_arg(args, {"uid", "jid", "jid/uid"}), rot_arg(args, "new_rotation", warnings)};
  }
  if (name == "scale_object") {
    return ScaleObject{str_arg(args, {"uid", "jid", "jid/uid"}), size_arg(args, "new_size")};
  }
  if (name == "replace_object") {
    return ReplaceObject{str_arg(args, {"uid_to_replace", "jid_to_replace", "jid/uid_to_replace"}),
                         str_arg(args, {"new_object_description"})};
  }
  if (name == "terminate") {
    auto it = args.find("reason");
    return Terminate{it != args.end() && it->is_string() ? it->get<std::string>() : std::string{}};
  }
  throw ArgError{"unknown tool '" + std::string(name) + "'"};
}

}  // namespace

std::optional<ToolCall> tool_call_from_json(const Json& j, std::size_t position,
                                            std::vector<FormatPenalty>& penalties,
                                            std::vector<std::string>* warnings) {
  const std::string where = "tool call #" + std::to_string(position + 1);
  if (!j.is_object()) {
    penalties.push_back({PenaltyKind::MissingParams, where + " is not an object"});
    return std::nullopt;
  }
  ToolCall call;
  auto id = j.find("id");
  if (id != j.end() && id->is_string()) {
    call.id = id->get<std::string>();
  } else {
    penalties.push_back({PenaltyKind::MissingParams, where + " has no string id"});
    call.id = "tool_" + std::to_string(position + 1);
  }
  auto name = j.find("name");
  if (name == j.end() || !name->is_string()) {
    penalties.push_back({PenaltyKind::MissingParams, where + " has no tool name"});
    return std::nullopt;
  }
  static const Json kEmpty = Json::object();
  auto args_it = j.find("arguments");
  const Json* args = &kEmpty;
  if (args_it != j.end()) {
    if (!args_it->is_object()) {
      penalties.push_back({PenaltyKind::MissingParams, where + " arguments must be an object"});
      return std::nullopt;
    }
    args = &*args_it;
  }
  try {
    call.payload = decode_payload(name->get<std::string>(), *args, warnings);
  } catch (const ArgError& e) {
    penalties.push_back({PenaltyKind::MissingParams, where + ": " + e.what});
    return std::nullopt;
  }
  return call;
}

ToolCall tool_call_from_json_strict(const Json& j) {
  std::vector<FormatPenalty> penalties;
  auto call = tool_call_from_json(j, 0, penalties);
  if (!call || !penalties.empty()) {
    throw Error(ErrorCode::InvariantViolation,
                "malformed tool call: " + (penalties.empty() ? std::string("?") : penalties.front().detail));
  }
  return *call;
}

}  // namespace scenechain
