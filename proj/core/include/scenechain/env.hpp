#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/judge.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/phys_opt.hpp"
#include "scenechain/policy.hpp"
#include "scenechain/rewards.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

struct EpisodeConfig {
  int max_turns = 15;  // 10 is the usual budget when starting from a given scene
  bool render_enabled = false;
  RewardWeights weights;
  bool physics_opt_on_finish = true;
  int history_depth = 4;
  PhysicsConfig physics;
  OptConfig opt;
  std::optional<std::string> room_type;  // overrides the type read from the instruction

  void validate() const;
  static EpisodeConfig from_json(const Json& j);
  Json to_json() const;
};

enum class TerminationCause { TerminateTool, MaxTurns, FatalInit };

std::string_view termination_cause_name(TerminationCause cause);
TerminationCause termination_cause_from_name(std::string_view name);

struct TurnRecord {
  int turn = 0;
  ObsPhase phase = ObsPhase::Edit;
  Json observation;  // wire form without render bytes
  std::string raw_text;
  std::vector<FormatPenalty> penalties;
  std::vector<std::string> warnings;
  std::vector<ToolCall> calls;
  std::vector<std::string> added_uids;
  Scene scene_before;
  Scene scene_after;
  std::optional<StepReward> reward;  // edit turns only
  std::optional<int> improvement;
  std::optional<RelevanceVerdict> relevance;  // turns that added objects
};

struct EpisodeRecord {
  std::string instruction;
  std::uint64_t seed = 0;
  std::string requested_room_type;
  EpisodeConfig config;
  std::optional<double> r_init;       // from-scratch episodes
  std::optional<Scene> init_scene;    // created or given starting scene
  bool from_scratch = false;
  MandatoryObjects mandatory;
  std::vector<TurnRecord> turns;
  std::vector<FormatPenalty> terminal_penalties;
  std::optional<Scene> pre_opt_scene;
  std::optional<OptReport> opt_report;
  std::optional<Json> opt_report_json;  // as loaded from disk
  Scene final_scene;
  ConsolidatedScores consolidated;
  FinalReward final_reward;
  TrajectoryScore score;
  TerminationCause cause = TerminationCause::MaxTurns;

  std::vector<double> step_values() const;  // r_init (if any) followed by each r_t
};

Observation assemble_observation(const std::string& instruction, const std::optional<Scene>& scene,
                                 const std::vector<HistoryEntry>& history, int turn, ObsPhase phase,
                                 const EpisodeConfig& cfg);

// One episode of the scene-editing loop. Without an initial scene the policy
// first creates the room. Policy and judge transport errors propagate.
EpisodeRecord run_episode(Policy& policy, Judge& judge, const std::string& instruction,
                          const std::optional<Scene>& init_scene, const EpisodeConfig& cfg, std::uint64_t seed,
                          const AssetCatalog& catalog);

// Per-turn reward from the recorded scenes and judge verdicts.
StepReward compute_step_reward(const TurnRecord& turn, const MandatoryObjects& mandatory, const EpisodeConfig& cfg,
                               const AssetCatalog& catalog);

FinalReward compute_final_reward(const Scene& final_scene, const std::vector<FormatPenalty>& terminal_penalties,
                                 const MandatoryObjects& mandatory, const ConsolidatedScores& consolidated,
                                 const EpisodeConfig& cfg, const AssetCatalog& catalog);

TrajectoryScore compute_trajectory(const std::vector<double>& steps, double final, const RewardWeights& weights);

struct RescoreResult {
  std::optional<double> r_init;
  std::vector<StepReward> steps;  // one per rewarded turn, in order
  FinalReward final_reward;
  TrajectoryScore score;
  bool matches = false;  // bit-identical to the stored values
};

// Recomputes every reward of a stored episode from its scenes and judge
// verdicts without calling the policy or the judge.
RescoreResult rescore_episode(const EpisodeRecord& record, const AssetCatalog& catalog);

}  // namespace scenechain
