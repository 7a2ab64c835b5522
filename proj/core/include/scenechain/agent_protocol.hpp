#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenechain/scene.hpp"
#include "scenechain/tool_call.hpp"

namespace scenechain {

enum class Phase { Init, Edit };

// a_t = (z_t, u_t): the diagnosis text plus the executable calls. At t = 0
// only create_scene is populated; afterwards only think/tool_calls.
struct ActionResponse {
  std::optional<std::string> think;
  std::vector<ToolCall> tool_calls;
  std::optional<Scene> create_scene;
  std::string raw_text;
};

struct ParsedResponse {
  ActionResponse response;
  std::vector<FormatPenalty> penalties;
  std::vector<std::string> warnings;
};

// Best-effort parse of raw agent text. Never throws on malformed input:
// every defect is reported as a FormatPenalty.
ParsedResponse parse_agent_response(std::string_view text, Phase phase);

std::string format_edit_response(std::string_view think, const std::vector<ToolCall>& calls);
std::string format_init_response(const Scene& scene);

}  // namespace scenechain
