#pragma once

#include <filesystem>

#include "scenechain/env.hpp"

namespace scenechain {

Json turn_record_to_json(const TurnRecord& t);
TurnRecord turn_record_from_json(const Json& j);

Json episode_summary_to_json(const EpisodeRecord& rec);

// <dir>/episode.jsonl holds one turn per line, <dir>/summary.json the rest.
void write_episode(const std::filesystem::path& dir, const EpisodeRecord& rec);
EpisodeRecord read_episode(const std::filesystem::path& dir);

}  // namespace scenechain
