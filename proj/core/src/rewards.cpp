#include "scenechain/rewards.hpp"

#include <algorithm>
#include <cmath>

#include "scenechain/error.hpp"

namespace scenechain {

namespace {

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

bool near_one(double v) { return std::fabs(v - 1.0) <= 1e-9; }

double number(const Json& j, const char* group, const char* key, double fallback) {
  if (!j.contains(group)) return fallback;
  const Json& g = j.at(group);
  if (!g.is_object()) throw Error(ErrorCode::InvalidConfig, std::string("weights group ") + group + " must be an object");
  if (!g.contains(key)) return fallback;
  if (!g.at(key).is_number()) throw Error(ErrorCode::InvalidConfig, std::string("weight ") + group + "." + key + " must be a number");
  return g.at(key).get<double>();
}

constexpr double kMaxRoomArea = 30.0;

}  // namespace

void RewardWeights::validate() const {
  for (double w : {alpha, beta, init, step_fmt, step_phy, step_sem, final_fmt, final_obj, final_scene_phys,
                   final_scene_vlm}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidConfig, "reward weights must be non-negative");
  }
  if (!near_one(alpha + beta)) throw Error(ErrorCode::InvalidConfig, "alpha + beta must equal 1");
  if (!near_one(step_fmt + step_phy + step_sem)) throw Error(ErrorCode::InvalidConfig, "iterative weights must sum to 1");
  if (!near_one(final_fmt + final_obj + final_scene_phys + final_scene_vlm)) {
    throw Error(ErrorCode::InvalidConfig, "terminal weights must sum to 1");
  }
}

RewardWeights RewardWeights::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "weights config must be a JSON object");
  RewardWeights w;
  w.alpha = number(j, "global", "alpha", w.alpha);
  w.beta = number(j, "global", "beta", w.beta);
  w.init = number(j, "init", "r_init", w.init);
  w.step_fmt = number(j, "iterative", "r_fmt", w.step_fmt);
  w.step_phy = number(j, "iterative", "r_phy", w.step_phy);
  w.step_sem = number(j, "iterative", "r_sem", w.step_sem);
  w.final_fmt = number(j, "terminal", "R_fmt", w.final_fmt);
  w.final_obj = number(j, "terminal", "R_obj", w.final_obj);
  w.final_scene_phys = number(j, "terminal", "R_scene_phys", w.final_scene_phys);
  w.final_scene_vlm = number(j, "terminal", "R_scene_vlm", w.final_scene_vlm);
  w.validate();
  return w;
}

Json RewardWeights::to_json() const {
  Json j = Json::object();
  j["global"] = Json{{"alpha", alpha}, {"beta", beta}};
  j["init"] = Json{{"r_init", init}};
  j["iterative"] = Json{{"r_fmt", step_fmt}, {"r_phy", step_phy}, {"r_sem", step_sem}};
  j["terminal"] = Json{{"R_fmt", final_fmt}, {"R_obj", final_obj}, {"R_scene_phys", final_scene_phys},
                       {"R_scene_vlm", final_scene_vlm}};
  return j;
}

bool is_improvement_value(double v) { return v == -1.0 || v == 0.0 || v == 1.0; }

bool is_consolidated_value(double v) { return v == -1.0 || v == -0.5 || v == 0.0 || v == 0.5 || v == 1.0; }

double init_reward(const std::optional<Scene>& scene, std::string_view requested_room_type,
                   const AssetCatalog& catalog) {
  if (!scene) return -1.0;
  const auto& fp = scene->room.bounds_bottom;
  if (fp.size() <= 3) return -1.0;
  double area = 0.0;
  try {
    area = room_area(scene->room);
  } catch (const Error&) {
    return -1.0;
  }
  if (area <= 0.0 || area > kMaxRoomArea) return -1.0;
  const auto canonical = [&](std::string_view t) {
    const std::string norm = normalize_text(t);
    if (catalog.mandatory_by_room().count(norm) != 0) return norm;
    auto m = catalog.match_room_type(norm);
    return m ? *m : norm;
  };
  if (!requested_room_type.empty() && canonical(scene->room.room_type) != canonical(requested_room_type)) return -1.0;
  return 1.0;
}

double format_reward(const std::vector<FormatPenalty>& penalties) {
  double p = 0.0;
  for (const auto& pen : penalties) p += pen.weight();
  return std::max(1.0 - p, -1.0);
}

double collision_rate_reward(double r) {
  if (r <= 20.0) return 1.0 - 0.5 * (r / 20.0);
  if (r <= 45.0) return 0.5 - 0.5 * (r - 20.0) / 25.0;
  return clamp1(-(r - 45.0) / 55.0);
}

double oob_rate_reward(double r) {
  if (r <= 10.0) return 1.0 - 0.5 * (r / 10.0);
  if (r <= 30.0) return 0.5 - 0.5 * (r - 10.0) / 20.0;
  return clamp1(-(r - 30.0) / 70.0);
}

double penetration_reward(double d) {
  if (d <= 0.1) return 1.0 - 5.0 * d;
  if (d <= 0.3) return 0.5 - 2.5 * (d - 0.1);
  if (d <= 0.6) return -0.5 * (d - 0.3) / 0.3;
  if (d <= 1.0) return -0.5 - 1.25 * (d - 0.6);
  return -1.0;
}

double oob_volume_reward(double v) {
  if (v <= 0.2) return 1.0 - 2.5 * v;
  if (v <= 0.5) return 0.5 - 1.67 * (v - 0.2);
  if (v <= 1.0) {
    const double start = 0.5 - 1.67 * 0.3;
    return start + (-0.5 - start) * (v - 0.5) / 0.5;
  }
  if (v <= 2.0) return -0.5 - 0.5 * (v - 1.0);
  return -1.0;
}

double support_reward(double r_unsup) { return clamp1(1.0 - std::max(0.0, r_unsup / 10.0)); }

double key_objects_score(std::size_t found, std::size_t total, bool essential_missing) {
  if (essential_missing) return -1.0;
  const double r = total == 0 ? 1.0 : static_cast<double>(found) / static_cast<double>(total);
  if (r >= 0.99) return 1.0;
  if (r > 0.5) return 0.0;
  return -1.0;
}

double relevance_score(std::size_t relevant, std::size_t irrelevant) {
  if (irrelevant == 0) return 1.0;
  if (relevant == 0) return -1.0;
  return relevant > irrelevant ? 0.5 : -0.5;
}

double size_proportion_score(const Scene& scene, const AssetCatalog& catalog) {
  if (scene.objects.empty()) return 1.0;
  std::size_t invalid = 0;
  for (const auto& o : scene.objects) {
    if (!size_valid(catalog, catalog.category_of(o.description), o.size)) ++invalid;
  }
  return clamp1(1.0 - 2.0 * static_cast<double>(invalid) / static_cast<double>(scene.objects.size()));
}

PresenceCheck mandatory_presence(const Scene& scene, const std::vector<std::string>& mandatory,
                                 const std::optional<std::string>& essential, const AssetCatalog& catalog) {
  std::map<std::string, std::size_t> available;
  for (const auto& o : scene.objects) ++available[catalog.category_of(o.description)];
  PresenceCheck p;
  p.total = mandatory.size();
  std::map<std::string, std::size_t> used;
  for (const auto& cat : mandatory) {
    if (used[cat] < available[cat]) {
      ++used[cat];
      ++p.found;
    }
  }
  if (essential) p.essential_missing = available[*essential] == 0;
  return p;
}

StepReward step_reward(const StepReward& c, const RewardWeights& w) {
  StepReward r = c;
  r.r_t = clamp1(w.step_fmt * c.r_fmt + w.step_phy_each() * (c.r_col + c.r_oob + c.r_pen + c.r_oob_vol) +
                 w.step_sem_each() * (c.r_imp + c.r_key));
  return r;
}

StepReward step_reward(double r_fmt, const SceneRatios& ratios, double r_imp, double r_key, const RewardWeights& w) {
  StepReward c;
  c.r_fmt = r_fmt;
  c.r_col = collision_rate_reward(ratios.r_col);
  c.r_oob = oob_rate_reward(ratios.r_oob);
  c.r_pen = penetration_reward(ratios.d_pen);
  c.r_oob_vol = oob_volume_reward(ratios.v_oob);
  c.r_imp = r_imp;
  c.r_key = r_key;
  return step_reward(c, w);
}

FinalReward final_reward(const FinalRewardInputs& in, const RewardWeights& w) {
  FinalReward f;
  f.R_fmt = in.r_fmt;
  f.R_key = in.r_key;
  f.R_size = in.r_size;
  f.R_obj = 0.5 * (in.r_key + in.r_size);
  f.R_support = support_reward(in.ratios.r_unsup);
  f.R_col = collision_rate_reward(in.ratios.r_col);
  f.R_oob = oob_rate_reward(in.ratios.r_oob);
  f.R_pen = penetration_reward(in.ratios.d_pen);
  f.R_oob_vol = oob_volume_reward(in.ratios.v_oob);
  f.R_scene_vlm = in.consolidated.mean();
  if (in.valid_object_count < 3) {
    f.physics_skipped = true;
    f.R_scene_phys = -1.0;
  } else {
    f.R_scene_phys = (f.R_support + f.R_col + f.R_oob + f.R_pen + f.R_oob_vol) / 5.0;
  }
  if (in.object_count < 4) {
    f.forced_failure = true;
    f.R_final = -1.0;
    return f;
  }
  f.R_final = clamp1(w.final_fmt * f.R_fmt + w.final_obj * f.R_obj + w.final_scene_phys * f.R_scene_phys +
                     w.final_scene_vlm * f.R_scene_vlm);
  return f;
}

TrajectoryScore trajectory_score(const std::vector<double>& steps, double final, const RewardWeights& w) {
  if (steps.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no step rewards");
  double sum = 0.0;
  for (double s : steps) sum += s;
  TrajectoryScore t;
  t.mean_step = sum / static_cast<double>(steps.size());
  t.final = final;
  t.j_tau = clamp1(w.alpha * t.mean_step + w.beta * final);
  return t;
}

Json step_reward_to_json(const StepReward& r) {
  return Json{{"r_fmt", r.r_fmt}, {"r_col", r.r_col}, {"r_oob", r.r_oob},   {"r_pen", r.r_pen},
              {"r_oob_vol", r.r_oob_vol}, {"r_imp", r.r_imp}, {"r_key", r.r_key}, {"r_t", r.r_t}};
}

StepReward step_reward_from_json(const Json& j) {
  StepReward r;
  r.r_fmt = j.at("r_fmt").get<double>();
  r.r_col = j.at("r_col").get<double>();
  r.r_oob = j.at("r_oob").get<double>();
  r.r_pen = j.at("r_pen").get<double>();
  r.r_oob_vol = j.at("r_oob_vol").get<double>();
  r.r_imp = j.at("r_imp").get<double>();
  r.r_key = j.at("r_key").get<double>();
  r.r_t = j.at("r_t").get<double>();
  return r;
}

Json final_reward_to_json(const FinalReward& r) {
  return Json{{"R_fmt", r.R_fmt},
              {"R_key", r.R_key},
              {"R_size", r.R_size},
              {"R_obj", r.R_obj},
              {"R_support", r.R_support},
              {"R_col", r.R_col},
              {"R_oob", r.R_oob},
              {"R_pen", r.R_pen},
              {"R_oob_vol", r.R_oob_vol},
              {"R_scene_phys", r.R_scene_phys},
              {"R_scene_vlm", r.R_scene_vlm},
              {"forced_failure", r.forced_failure},
              {"physics_skipped", r.physics_skipped},
              {"R_final", r.R_final}};
}

FinalReward final_reward_from_json(const Json& j) {
  FinalReward r;
  r.R_fmt = j.at("R_fmt").get<double>();
  r.R_key = j.at("R_key").get<double>();
  r.R_size = j.at("R_size").get<double>();
  r.R_obj = j.at("R_obj").get<double>();
  r.R_support = j.at("R_support").get<double>();
  r.R_col = j.at("R_col").get<double>();
  r.R_oob = j.at("R_oob").get<double>();
  r.R_pen = j.at("R_pen").get<double>();
  r.R_oob_vol = j.at("R_oob_vol").get<double>();
  r.R_scene_phys = j.at("R_scene_phys").get<double>();
  r.R_scene_vlm = j.at("R_scene_vlm").get<double>();
  r.forced_failure = j.at("forced_failure").get<bool>();
  r.physics_skipped = j.at("physics_skipped").get<bool>();
  r.R_final = j.at("R_final").get<double>();
  return r;
}

Json trajectory_score_to_json(const TrajectoryScore& s) {
  return Json{{"mean_step", s.mean_step}, {"final", s.final}, {"j_tau", s.j_tau}};
}

TrajectoryScore trajectory_score_from_json(const Json& j) {
  return TrajectoryScore{j.at("mean_step").get<double>(), j.at("final").get<double>(), j.at("j_tau").get<double>()};
}

}  // namespace scenechain
