#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/chain_synth.hpp"
#include "scenechain/rng.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

struct FixtureOptions {
  int min_objects = 8;
  int max_objects = 12;
  double l_shape_probability = 0.2;
};

// Room types with a built-in object list, in catalog order.
std::vector<std::string> fixture_room_types(const AssetCatalog& catalog);

// A furnished room with no collisions and nothing out of bounds: the room's
// mandatory objects plus common extras, surface items on hosts and wall items
// flush to walls. Throws SceneRejected if no clean layout is found.
Scene make_fixture_scene(std::string_view room_type, std::uint64_t seed, const AssetCatalog& catalog,
                         const FixtureOptions& opts = {});

// n scenes cycling through the room types; ids are fixture_000, fixture_001, ...
std::vector<NamedScene> make_fixture_set(std::size_t n, std::uint64_t seed, const AssetCatalog& catalog,
                                         const FixtureOptions& opts = {});

enum class GoalVariant { Chaotic, Missing, ChaoticMissing };

std::string_view goal_variant_name(GoalVariant v);
GoalVariant goal_variant_from_name(std::string_view name);

// Starting scene for goal-oriented episodes: one turn of reverse edits applied
// to a clean scene (moves/rotations/rescales, deletions, or both).
Scene make_goal_scene(const Scene& clean, GoalVariant variant, std::uint64_t seed, const AssetCatalog& catalog);

// Shifts `moves` random objects by up to `max_offset` in x and z.
Scene jitter_scene(const Scene& clean, Rng& rng, int moves, double max_offset);

}  // namespace scenechain
