#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/scene.hpp"
#include "scenechain/tool_call.hpp"

namespace scenechain {

struct RewardWeights {
  double alpha = 0.4;
  double beta = 0.6;
  double init = 1.0;
  double step_fmt = 0.10;
  double step_phy = 0.40;  // split evenly over the four physical components
  double step_sem = 0.50;  // split evenly over improvement and key objects
  double final_fmt = 0.10;
  double final_obj = 0.30;
  double final_scene_phys = 0.30;
  double final_scene_vlm = 0.30;

  double step_phy_each() const { return step_phy / 4.0; }
  double step_sem_each() const { return step_sem / 2.0; }

  // Non-negative weights; alpha+beta, step and terminal groups each sum to 1.
  void validate() const;

  static RewardWeights from_json(const Json& j);
  Json to_json() const;
};

struct ConsolidatedScores {
  double rationality = 0.0;
  double requirement_match = 0.0;
  double scene_graph = 0.0;

  double mean() const { return (rationality + requirement_match + scene_graph) / 3.0; }
  friend bool operator==(const ConsolidatedScores&, const ConsolidatedScores&) = default;
};

struct JudgeScores {
  int improvement = 0;  // -1, 0, 1
  std::vector<std::string> mandatory_objects;
  std::vector<std::string> relevant;
  std::vector<std::string> irrelevant;
  ConsolidatedScores consolidated;
};

bool is_improvement_value(double v);
bool is_consolidated_value(double v);

struct StepReward {
  double r_fmt = 0.0;
  double r_col = 0.0;
  double r_oob = 0.0;
  double r_pen = 0.0;
  double r_oob_vol = 0.0;
  double r_imp = 0.0;
  double r_key = 0.0;
  double r_t = 0.0;

  friend bool operator==(const StepReward&, const StepReward&) = default;
};

struct FinalReward {
  double R_fmt = 0.0;
  double R_key = 0.0;
  double R_size = 0.0;
  double R_obj = 0.0;
  double R_support = 0.0;
  double R_col = 0.0;
  double R_oob = 0.0;
  double R_pen = 0.0;
  double R_oob_vol = 0.0;
  double R_scene_phys = 0.0;
  double R_scene_vlm = 0.0;
  bool forced_failure = false;  // fewer than 4 objects
  bool physics_skipped = false;  // fewer than 3 valid objects
  double R_final = 0.0;

  friend bool operator==(const FinalReward&, const FinalReward&) = default;
};

struct TrajectoryScore {
  double mean_step = 0.0;
  double final = 0.0;
  double j_tau = 0.0;

  friend bool operator==(const TrajectoryScore&, const TrajectoryScore&) = default;
};

// +1 or -1. A missing scene stands for a parse failure or missing tag.
double init_reward(const std::optional<Scene>& scene, std::string_view requested_room_type,
                   const AssetCatalog& catalog);

double format_reward(const std::vector<FormatPenalty>& penalties);

double collision_rate_reward(double r_col_percent);
double oob_rate_reward(double r_oob_percent);
double penetration_reward(double d_pen);
double oob_volume_reward(double v_oob);
double support_reward(double r_unsup_percent);

double key_objects_score(std::size_t found, std::size_t total, bool essential_missing);
double relevance_score(std::size_t relevant, std::size_t irrelevant);
double size_proportion_score(const Scene& scene, const AssetCatalog& catalog);

struct PresenceCheck {
  std::size_t found = 0;
  std::size_t total = 0;
  bool essential_missing = false;
};

// Multiset match of mandatory categories against the scene's objects.
PresenceCheck mandatory_presence(const Scene& scene, const std::vector<std::string>& mandatory,
                                 const std::optional<std::string>& essential, const AssetCatalog& catalog);

StepReward step_reward(double r_fmt, const SceneRatios& ratios, double r_imp, double r_key,
                       const RewardWeights& weights = {});
StepReward step_reward(const StepReward& components, const RewardWeights& weights = {});

struct FinalRewardInputs {
  std::size_t object_count = 0;
  std::size_t valid_object_count = 0;
  double r_fmt = 1.0;
  double r_key = 0.0;
  double r_size = 0.0;
  SceneRatios ratios;
  ConsolidatedScores consolidated;
};

FinalReward final_reward(const FinalRewardInputs& in, const RewardWeights& weights = {});

// Throws EmptyTrajectory for an empty list.
TrajectoryScore trajectory_score(const std::vector<double>& step_rewards, double final,
                                 const RewardWeights& weights = {});

Json step_reward_to_json(const StepReward& r);
StepReward step_reward_from_json(const Json& j);
Json final_reward_to_json(const FinalReward& r);
FinalReward final_reward_from_json(const Json& j);
Json trajectory_score_to_json(const TrajectoryScore& s);
TrajectoryScore trajectory_score_from_json(const Json& j);

}  // namespace scenechain
