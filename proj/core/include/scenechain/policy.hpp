#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/chain_synth.hpp"
#include "scenechain/rng.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

enum class ObsPhase { Init, Edit, Terminal };

std::string_view obs_phase_name(ObsPhase phase);
ObsPhase obs_phase_from_name(std::string_view name);

struct HistoryEntry {
  int turn = 0;
  std::string summary;
  double r_t = 0.0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

// o_t = (I, G_t, V_t, H_{t-1})
struct Observation {
  std::string instruction;
  std::string scene_json;
  std::optional<std::vector<std::uint8_t>> render;
  std::string render_format;  // "png" when a render is attached
  bool render_failed = false;
  std::vector<HistoryEntry> history;
  int turn = 0;
  ObsPhase phase = ObsPhase::Init;

  // Wire form; the render is attached as base64 only when requested.
  Json to_json(bool include_render) const;
};

// Produces raw agent text for an observation. Transport-backed policies throw
// PolicyTransport errors.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string act(const Observation& obs) = 0;
};

// Emits the turns of a stored chain, then terminates.
class ReplayPolicy : public Policy {
 public:
  explicit ReplayPolicy(EditChain chain) : chain_(std::move(chain)) {}
  std::string act(const Observation& obs) override;

 private:
  EditChain chain_;
};

// Random but well-formed edits; useful for fuzzing the environment.
class RandomPolicy : public Policy {
 public:
  RandomPolicy(std::uint64_t seed, const AssetCatalog& catalog) : rng_(seed), catalog_(catalog) {}
  std::string act(const Observation& obs) override;

 private:
  Rng rng_;
  const AssetCatalog& catalog_;
};

// Builds the room's mandatory object list a few objects per turn: floor pieces
// largest first against the walls, then items on host surfaces, then wall
// hangings, and terminates once everything placeable is in the scene.
class GreedyBuilderPolicy : public Policy {
 public:
  explicit GreedyBuilderPolicy(const AssetCatalog& catalog, int adds_per_turn = 3)
      : catalog_(catalog), adds_per_turn_(adds_per_turn) {}
  std::string act(const Observation& obs) override;

  static RoomGeometry room_for(std::string_view room_type);

 private:
  const AssetCatalog& catalog_;
  int adds_per_turn_;
  std::map<std::string, int> unplaceable_;  // category -> instances that found no spot
};

// Default room type when an instruction names none.
inline constexpr std::string_view kDefaultRoomType = "living room";

}  // namespace scenechain
