#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/scene.hpp"
#include "scenechain/tool_call.hpp"

namespace scenechain {

struct TransitionResult {
  Scene scene;
  std::vector<FormatPenalty> penalties;
  std::vector<std::string> warnings;
  // uid created, edited or removed by the call; empty for no-ops and rejects.
  std::optional<std::string> affected_uid;
};

// The transition function. Pure: the input scene is never modified.
TransitionResult apply_tool_call(const Scene& scene, const ToolCall& call, const AssetCatalog& catalog);

struct BatchResult {
  Scene scene;
  std::vector<FormatPenalty> penalties;
  std::vector<std::string> warnings;
  std::vector<std::string> added_uids;  // by add_object and replace_object
  bool terminated = false;
};

// Applies calls in order; calls after a terminate are ignored.
BatchResult apply_tool_calls(const Scene& scene, const std::vector<ToolCall>& calls, const AssetCatalog& catalog);

// Size actually instantiated for a requested description/size pair: kept as
// given when it already has the proportions of a catalog entry of the matched
// category, otherwise the retrieved entry's canonical size scaled to the same
// volume as the request.
Vec3 instantiated_size(const AssetCatalog& catalog, std::string_view description, const Vec3& target);

// Smallest unused "<category>_<n>" with n >= 1.
std::string fresh_uid(const Scene& scene, std::string_view category);

}  // namespace scenechain
