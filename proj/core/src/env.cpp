#include "scenechain/env.hpp"

#include <algorithm>
#include <cstdio>

#include "scenechain/agent_protocol.hpp"
#include "scenechain/error.hpp"
#include "scenechain/render.hpp"
#include "scenechain/transition.hpp"

namespace scenechain {

void EpisodeConfig::validate() const {
  if (max_turns < 1) throw Error(ErrorCode::InvalidConfig, "max_turns must be at least 1");
  if (history_depth < 0) throw Error(ErrorCode::InvalidConfig, "history_depth must be non-negative");
  if (opt.max_steps < 0) throw Error(ErrorCode::InvalidConfig, "optimizer max_steps must be non-negative");
  weights.validate();
}

EpisodeConfig EpisodeConfig::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "episode config must be an object");
  EpisodeConfig c;
  c.max_turns = j.value("max_turns", c.max_turns);
  c.render_enabled = j.value("render_enabled", c.render_enabled);
  c.physics_opt_on_finish = j.value("physics_opt_on_finish", c.physics_opt_on_finish);
  c.history_depth = j.value("history_depth", c.history_depth);
  if (j.contains("weights")) c.weights = RewardWeights::from_json(j.at("weights"));
  if (j.contains("physics")) {
    const Json& p = j.at("physics");
    c.physics.eps_col = p.value("eps_col", c.physics.eps_col);
    c.physics.eps_oob = p.value("eps_oob", c.physics.eps_oob);
    c.physics.eps_support = p.value("eps_support", c.physics.eps_support);
    c.physics.min_support_overlap = p.value("min_support_overlap", c.physics.min_support_overlap);
  }
  c.opt.physics = c.physics;
  if (j.contains("optimizer")) {
    const Json& o = j.at("optimizer");
    c.opt.max_steps = o.value("max_steps", c.opt.max_steps);
    c.opt.oob_step = o.value("oob_step", c.opt.oob_step);
    c.opt.margin = o.value("margin", c.opt.margin);
  }
  if (j.contains("room_type") && !j.at("room_type").is_null()) c.room_type = j.at("room_type").get<std::string>();
  c.validate();
  return c;
}

Json EpisodeConfig::to_json() const {
  Json j = Json::object();
  j["max_turns"] = max_turns;
  j["render_enabled"] = render_enabled;
  j["physics_opt_on_finish"] = physics_opt_on_finish;
  j["history_depth"] = history_depth;
  j["weights"] = weights.to_json();
  j["physics"] = Json{{"eps_col", physics.eps_col},
                      {"eps_oob", physics.eps_oob},
                      {"eps_support", physics.eps_support},
                      {"min_support_overlap", physics.min_support_overlap}};
  j["optimizer"] = Json{{"max_steps", opt.max_steps}, {"oob_step", opt.oob_step}, {"margin", opt.margin}};
  j["room_type"] = room_type ? Json(*room_type) : Json(nullptr);
  return j;
}

std::string_view termination_cause_name(TerminationCause cause) {
  switch (cause) {
    case TerminationCause::TerminateTool: return "terminate_tool";
    case TerminationCause::MaxTurns: return "max_turns";
    case TerminationCause::FatalInit: return "fatal_init";
  }
  return "max_turns";
}

TerminationCause termination_cause_from_name(std::string_view name) {
  if (name == "terminate_tool") return TerminationCause::TerminateTool;
  if (name == "max_turns") return TerminationCause::MaxTurns;
  if (name == "fatal_init") return TerminationCause::FatalInit;
  throw Error(ErrorCode::MalformedJson, "unknown termination cause '" + std::string(name) + "'");
}

std::vector<double> EpisodeRecord::step_values() const {
  std::vector<double> v;
  if (r_init) v.push_back(*r_init);
  for (const auto& t : turns) {
    if (t.reward) v.push_back(t.reward->r_t);
  }
  return v;
}

Observation assemble_observation(const std::string& instruction, const std::optional<Scene>& scene,
                                 const std::vector<HistoryEntry>& history, int turn, ObsPhase phase,
                                 const EpisodeConfig& cfg) {
  Observation obs;
  obs.instruction = instruction;
  obs.turn = turn;
  obs.phase = phase;
  const std::size_t depth = static_cast<std::size_t>(std::max(0, cfg.history_depth));
  const std::size_t first = history.size() > depth ? history.size() - depth : 0;
  obs.history.assign(history.begin() + static_cast<std::ptrdiff_t>(first), history.end());
  if (scene) {
    obs.scene_json = serialize_scene(*scene);
    if (cfg.render_enabled) {
      try {
        obs.render = render_merged(*scene);
        obs.render_format = "png";
      } catch (const std::exception&) {
        obs.render_failed = true;
      }
    }
  }
  return obs;
}

namespace {

std::string history_summary(const TurnRecord& t) {
  std::string s;
  for (const auto& c : t.calls) {
    if (!s.empty()) s += ", ";
    s += std::string(c.name());
  }
  if (s.empty()) s = "no valid tool calls";
  if (!t.penalties.empty()) s += "; " + std::to_string(t.penalties.size()) + " format penalties";
  return s;
}

bool only_terminate(const std::vector<ToolCall>& calls) {
  return !calls.empty() && calls.front().is_terminate();
}

std::string resolve_room_type(const std::string& instruction, const EpisodeConfig& cfg, const AssetCatalog& catalog) {
  if (cfg.room_type) return catalog.match_room_type(*cfg.room_type).value_or(*cfg.room_type);
  return catalog.match_room_type(instruction).value_or("");
}

MandatoryObjects query_mandatory(Judge& judge, const std::string& instruction, const std::string& room_type) {
  try {
    return judge.mandatory(instruction, room_type);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownRoomType) throw;
    MandatoryObjects none;
    none.room_type = room_type;
    return none;
  }
}

}  // namespace

StepReward compute_step_reward(const TurnRecord& turn, const MandatoryObjects& mandatory, const EpisodeConfig& cfg,
                               const AssetCatalog& catalog) {
  const double r_fmt = format_reward(turn.penalties);
  const SceneRatios ratios = scene_ratios(check_physics(turn.scene_after, cfg.physics), turn.scene_after);
  const double r_imp = turn.improvement.value_or(0);
  double r_key = 0.0;
  if (turn.relevance && !(turn.relevance->relevant.empty() && turn.relevance->irrelevant.empty())) {
    r_key = relevance_score(turn.relevance->relevant.size(), turn.relevance->irrelevant.size());
  } else {
    const PresenceCheck p = mandatory_presence(turn.scene_after, mandatory.items, mandatory.essential, catalog);
    r_key = key_objects_score(p.found, p.total, p.essential_missing);
  }
  return step_reward(r_fmt, ratios, r_imp, r_key, cfg.weights);
}

FinalReward compute_final_reward(const Scene& final_scene, const std::vector<FormatPenalty>& terminal_penalties,
                                 const MandatoryObjects& mandatory, const ConsolidatedScores& consolidated,
                                 const EpisodeConfig& cfg, const AssetCatalog& catalog) {
  const ViolationReport report = check_physics(final_scene, cfg.physics);
  FinalRewardInputs in;
  in.object_count = final_scene.objects.size();
  for (const auto& o : final_scene.objects) {
    if (!report.oob.count(o.uid) && size_valid(catalog, catalog.category_of(o.description), o.size)) {
      ++in.valid_object_count;
    }
  }
  in.r_fmt = format_reward(terminal_penalties);
  const PresenceCheck p = mandatory_presence(final_scene, mandatory.items, mandatory.essential, catalog);
  in.r_key = key_objects_score(p.found, p.total, p.essential_missing);
  in.r_size = size_proportion_score(final_scene, catalog);
  in.ratios = scene_ratios(report, final_scene);
  in.consolidated = consolidated;
  return final_reward(in, cfg.weights);
}

TrajectoryScore compute_trajectory(const std::vector<double>& steps, double final, const RewardWeights& weights) {
  if (!steps.empty()) return trajectory_score(steps, final, weights);
  // No rewarded step at all: the process term takes its floor.
  TrajectoryScore s;
  s.mean_step = -1.0;
  s.final = final;
  s.j_tau = std::clamp(weights.alpha * s.mean_step + weights.beta * final, -1.0, 1.0);
  return s;
}

EpisodeRecord run_episode(Policy& policy, Judge& judge, const std::string& instruction,
                          const std::optional<Scene>& init_scene, const EpisodeConfig& cfg, std::uint64_t seed,
                          const AssetCatalog& catalog) {
  cfg.validate();
  EpisodeRecord rec;
  rec.instruction = instruction;
  rec.seed = seed;
  rec.config = cfg;
  rec.requested_room_type = resolve_room_type(instruction, cfg, catalog);
  rec.from_scratch = !init_scene.has_value();

  std::vector<HistoryEntry> history;
  Scene scene;
  std::vector<FormatPenalty> last_penalties;

  if (init_scene) {
    validate_scene(*init_scene);
    scene = *init_scene;
    rec.init_scene = scene;
  } else {
    TurnRecord t;
    t.turn = 0;
    t.phase = ObsPhase::Init;
    const Observation obs = assemble_observation(instruction, std::nullopt, history, 0, ObsPhase::Init, cfg);
    t.observation = obs.to_json(false);
    t.raw_text = policy.act(obs);
    ParsedResponse parsed = parse_agent_response(t.raw_text, Phase::Init);
    t.penalties = parsed.penalties;
    t.warnings = parsed.warnings;
    rec.r_init = init_reward(parsed.response.create_scene, rec.requested_room_type, catalog);
    if (!parsed.response.create_scene) {
      rec.turns.push_back(std::move(t));
      rec.cause = TerminationCause::FatalInit;
      rec.final_reward.forced_failure = true;
      rec.final_reward.R_final = -1.0;
      rec.score = compute_trajectory(rec.step_values(), -1.0, cfg.weights);
      return rec;
    }
    scene = *parsed.response.create_scene;
    t.scene_after = scene;
    rec.init_scene = scene;
    last_penalties = t.penalties;
    history.push_back({0, "create_scene", *rec.r_init});
    rec.turns.push_back(std::move(t));
  }

  const std::string judge_room = rec.requested_room_type.empty() ? scene.room.room_type : rec.requested_room_type;
  rec.mandatory = query_mandatory(judge, instruction, judge_room);
  const JudgeContext ctx{instruction, rec.mandatory.room_type.empty() ? judge_room : rec.mandatory.room_type,
                         rec.mandatory.items};

  rec.cause = TerminationCause::MaxTurns;
  for (int turn = 1; turn <= cfg.max_turns; ++turn) {
    TurnRecord t;
    t.turn = turn;
    t.phase = ObsPhase::Edit;
    const Observation obs = assemble_observation(instruction, scene, history, turn, ObsPhase::Edit, cfg);
    t.observation = obs.to_json(false);
    t.raw_text = policy.act(obs);
    ParsedResponse parsed = parse_agent_response(t.raw_text, Phase::Edit);
    t.penalties = parsed.penalties;
    t.warnings = parsed.warnings;
    t.calls = parsed.response.tool_calls;
    t.scene_before = scene;
    last_penalties = t.penalties;

    if (only_terminate(t.calls)) {
      t.phase = ObsPhase::Terminal;
      t.scene_after = scene;
      rec.cause = TerminationCause::TerminateTool;
      rec.turns.push_back(std::move(t));
      break;
    }

    BatchResult batch = apply_tool_calls(scene, t.calls, catalog);
    t.penalties.insert(t.penalties.end(), batch.penalties.begin(), batch.penalties.end());
    t.warnings.insert(t.warnings.end(), batch.warnings.begin(), batch.warnings.end());
    t.added_uids = batch.added_uids;
    t.scene_after = std::move(batch.scene);
    last_penalties = t.penalties;

    t.improvement = judge.improvement(t.scene_before, t.scene_after, ctx);
    if (!t.added_uids.empty()) {
      std::vector<std::string> descriptions;
      for (const auto& uid : t.added_uids) {
        if (const SceneObject* o = t.scene_after.find(uid)) descriptions.push_back(o->description);
      }
      if (!descriptions.empty()) t.relevance = judge.relevance(descriptions, ctx);
    }
    t.reward = compute_step_reward(t, rec.mandatory, cfg, catalog);
    scene = t.scene_after;
    history.push_back({turn, history_summary(t), t.reward->r_t});
    const bool stop = batch.terminated;
    rec.turns.push_back(std::move(t));
    if (stop) {
      rec.cause = TerminationCause::TerminateTool;
      break;
    }
  }

  rec.terminal_penalties = last_penalties;
  rec.pre_opt_scene = scene;
  if (cfg.physics_opt_on_finish) {
    Rng rng(derive_seed(seed, "phys_opt", 0));
    OptResult opt = optimize(scene, cfg.opt, rng);
    scene = std::move(opt.scene);
    rec.opt_report = std::move(opt.report);
  }
  rec.final_scene = scene;
  rec.consolidated = judge.consolidated(scene, ctx);
  rec.final_reward =
      compute_final_reward(scene, rec.terminal_penalties, rec.mandatory, rec.consolidated, cfg, catalog);
  rec.score = compute_trajectory(rec.step_values(), rec.final_reward.R_final, cfg.weights);
  return rec;
}

RescoreResult rescore_episode(const EpisodeRecord& record, const AssetCatalog& catalog) {
  RescoreResult out;
  const EpisodeConfig& cfg = record.config;
  std::vector<double> steps;
  if (record.from_scratch) {
    const std::optional<Scene> created =
        record.cause == TerminationCause::FatalInit ? std::nullopt : record.init_scene;
    out.r_init = init_reward(created, record.requested_room_type, catalog);
    steps.push_back(*out.r_init);
  }
  for (const auto& t : record.turns) {
    if (!t.reward) continue;
    out.steps.push_back(compute_step_reward(t, record.mandatory, cfg, catalog));
    steps.push_back(out.steps.back().r_t);
  }
  if (record.cause == TerminationCause::FatalInit) {
    out.final_reward.forced_failure = true;
    out.final_reward.R_final = -1.0;
  } else {
    out.final_reward = compute_final_reward(record.final_scene, record.terminal_penalties, record.mandatory,
                                            record.consolidated, cfg, catalog);
  }
  out.score = compute_trajectory(steps, out.final_reward.R_final, cfg.weights);

  bool ok = out.r_init == record.r_init && out.final_reward == record.final_reward && out.score == record.score;
  std::size_t k = 0;
  for (const auto& t : record.turns) {
    if (!t.reward) continue;
    ok = ok && k < out.steps.size() && out.steps[k] == *t.reward;
    ++k;
  }
  out.matches = ok && k == out.steps.size();
  return out;
}

}  // namespace scenechain
