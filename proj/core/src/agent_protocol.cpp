#include "scenechain/agent_protocol.hpp"

#include "scenechain/error.hpp"

namespace scenechain {
namespace {

struct TagSpan {
  std::size_t open = std::string_view::npos;   // index of '<tag>'
  std::size_t body_begin = 0;
  std::size_t body_end = 0;                    // index of '</tag>'
  bool complete() const { return open != std::string_view::npos && body_end != std::string_view::npos; }
  bool present() const { return open != std::string_view::npos; }
};

TagSpan find_tag(std::string_view text, std::string_view tag) {
  TagSpan span;
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  span.open = text.find(open);
  if (span.open == std::string_view::npos) {
    span.body_end = std::string_view::npos;
    return span;
  }
  span.body_begin = span.open + open.size();
  span.body_end = text.find(close, span.body_begin);
  return span;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Tolerates a markdown fence around the JSON payload.
std::string_view strip_fence(std::string_view s) {
  s = trim(s);
  if (s.starts_with("```")) {
    const auto nl = s.find('\n');
    if (nl == std::string_view::npos) return {};
    s.remove_prefix(nl + 1);
    const auto fence = s.rfind("```");
    if (fence != std::string_view::npos) s = s.substr(0, fence);
  }
  return trim(s);
}

void parse_init(std::string_view text, ParsedResponse& out) {
  const TagSpan cs = find_tag(text, "create_scene");
  if (!cs.complete()) {
    out.penalties.push_back({PenaltyKind::TagOrder, "missing <create_scene> block"});
    return;
  }
  const std::string_view body = strip_fence(text.substr(cs.body_begin, cs.body_end - cs.body_begin));
  try {
    out.response.create_scene = parse_scene_json(body, &out.warnings);
  } catch (const Error& e) {
    out.penalties.push_back({PenaltyKind::JsonParse, e.what()});
  }
}

void parse_edit(std::string_view text, ParsedResponse& out) {
  const TagSpan think = find_tag(text, "think");
  const TagSpan calls = find_tag(text, "tool_calls");

  if (think.complete()) {
    out.response.think = std::string(trim(text.substr(think.body_begin, think.body_end - think.body_begin)));
  }
  if (!calls.complete()) {
    out.penalties.push_back({PenaltyKind::TagOrder, "missing <tool_calls> block"});
    return;
  }
  if (!think.complete() || think.open > calls.open) {
    out.penalties.push_back({PenaltyKind::TagOrder, "<think> must precede <tool_calls>"});
  }

  const std::string_view body = strip_fence(text.substr(calls.body_begin, calls.body_end - calls.body_begin));
  Json arr;
  try {
    arr = Json::parse(body.begin(), body.end());
  } catch (const nlohmann::json::parse_error& e) {
    out.penalties.push_back({PenaltyKind::JsonParse, e.what()});
    return;
  }
  if (!arr.is_array()) {
    out.penalties.push_back({PenaltyKind::JsonParse, "<tool_calls> must hold a JSON array"});
    return;
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    auto call = tool_call_from_json(arr[i], i, out.penalties, &out.warnings);
    if (call) out.response.tool_calls.push_back(std::move(*call));
  }
}

}  // namespace

ParsedResponse parse_agent_response(std::string_view text, Phase phase) {
  ParsedResponse out;
  out.response.raw_text = std::string(text);
  if (phase == Phase::Init) {
    parse_init(text, out);
  } else {
    parse_edit(text, out);
  }
  return out;
}

std::string format_edit_response(std::string_view think, const std::vector<ToolCall>& calls) {
  Json arr = Json::array();
  for (const auto& c : calls) arr.push_back(tool_call_to_json(c));
  std::string out = "<think>\n";
  out += think;
  out += "\n</think>\n\n<tool_calls>\n";
  out += write_json(arr, FloatFormat::Fixed6);
  out += "</tool_calls>\n";
  return out;
}

std::string format_init_response(const Scene& scene) {
  return "<create_scene>\n" + serialize_scene(scene) + "</create_scene>\n";
}

}  // namespace scenechain
