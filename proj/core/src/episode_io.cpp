#include "scenechain/episode_io.hpp"

#include <fstream>
#include <sstream>

#include "scenechain/error.hpp"

namespace scenechain {

namespace fs = std::filesystem;

namespace {

Json penalties_to_json(const std::vector<FormatPenalty>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(penalty_to_json(p));
  return a;
}

std::vector<FormatPenalty> penalties_from_json(const Json& j) {
  std::vector<FormatPenalty> out;
  for (const auto& p : j) out.push_back(penalty_from_json(p));
  return out;
}

Json mandatory_to_json(const MandatoryObjects& m) {
  return Json{{"room_type", m.room_type},
              {"items", m.items},
              {"essential", m.essential ? Json(*m.essential) : Json(nullptr)}};
}

MandatoryObjects mandatory_from_json(const Json& j) {
  MandatoryObjects m;
  m.room_type = j.at("room_type").get<std::string>();
  m.items = j.at("items").get<std::vector<std::string>>();
  if (!j.at("essential").is_null()) m.essential = j.at("essential").get<std::string>();
  return m;
}

Json consolidated_to_json(const ConsolidatedScores& c) {
  return Json{{"rationality", c.rationality}, {"requirement_match", c.requirement_match}, {"scene_graph", c.scene_graph}};
}

ConsolidatedScores consolidated_from_json(const Json& j) {
  return ConsolidatedScores{j.at("rationality").get<double>(), j.at("requirement_match").get<double>(),
                            j.at("scene_graph").get<double>()};
}

Json optional_scene(const std::optional<Scene>& s) { return s ? scene_to_json(*s) : Json(nullptr); }

// The init turn has no scene before it (and none after a failed create).
Json stored_scene(const Scene& s) { return s.room.bounds_bottom.empty() ? Json(nullptr) : scene_to_json(s); }

}  // namespace

Json turn_record_to_json(const TurnRecord& t) {
  Json j = Json::object();
  j["turn"] = t.turn;
  j["phase"] = std::string(obs_phase_name(t.phase));
  j["observation"] = t.observation;
  j["raw_text"] = t.raw_text;
  j["penalties"] = penalties_to_json(t.penalties);
  j["warnings"] = t.warnings;
  Json calls = Json::array();
  for (const auto& c : t.calls) calls.push_back(tool_call_to_json(c));
  j["tool_calls"] = std::move(calls);
  j["added_uids"] = t.added_uids;
  j["scene_before"] = stored_scene(t.scene_before);
  j["scene_after"] = stored_scene(t.scene_after);
  j["reward"] = t.reward ? step_reward_to_json(*t.reward) : Json(nullptr);
  j["improvement"] = t.improvement ? Json(*t.improvement) : Json(nullptr);
  j["relevance"] = t.relevance ? Json{{"relevant", t.relevance->relevant}, {"irrelevant", t.relevance->irrelevant}}
                               : Json(nullptr);
  return j;
}

TurnRecord turn_record_from_json(const Json& j) {
  TurnRecord t;
  t.turn = j.at("turn").get<int>();
  t.phase = obs_phase_from_name(j.at("phase").get<std::string>());
  t.observation = j.at("observation");
  t.raw_text = j.at("raw_text").get<std::string>();
  t.penalties = penalties_from_json(j.at("penalties"));
  t.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& c : j.at("tool_calls")) t.calls.push_back(tool_call_from_json_strict(c));
  t.added_uids = j.at("added_uids").get<std::vector<std::string>>();
  if (!j.at("scene_before").is_null()) t.scene_before = scene_from_json(j.at("scene_before"));
  if (!j.at("scene_after").is_null()) t.scene_after = scene_from_json(j.at("scene_after"));
  if (!j.at("reward").is_null()) t.reward = step_reward_from_json(j.at("reward"));
  if (!j.at("improvement").is_null()) t.improvement = j.at("improvement").get<int>();
  if (!j.at("relevance").is_null()) {
    t.relevance = RelevanceVerdict{j.at("relevance").at("relevant").get<std::vector<std::string>>(),
                                   j.at("relevance").at("irrelevant").get<std::vector<std::string>>()};
  }
  return t;
}

Json episode_summary_to_json(const EpisodeRecord& rec) {
  Json j = Json::object();
  j["instruction"] = rec.instruction;
  j["seed"] = std::to_string(rec.seed);
  j["requested_room_type"] = rec.requested_room_type;
  j["config"] = rec.config.to_json();
  j["from_scratch"] = rec.from_scratch;
  j["r_init"] = rec.r_init ? Json(*rec.r_init) : Json(nullptr);
  j["init_scene"] = optional_scene(rec.init_scene);
  j["mandatory"] = mandatory_to_json(rec.mandatory);
  j["turn_count"] = rec.turns.size();
  j["terminal_penalties"] = penalties_to_json(rec.terminal_penalties);
  j["pre_opt_scene"] = optional_scene(rec.pre_opt_scene);
  if (rec.opt_report) {
    j["opt_report"] = opt_report_to_json(*rec.opt_report);
  } else {
    j["opt_report"] = rec.opt_report_json.value_or(Json(nullptr));
  }
  j["final_scene"] = scene_to_json(rec.final_scene);
  j["consolidated"] = consolidated_to_json(rec.consolidated);
  j["final_reward"] = final_reward_to_json(rec.final_reward);
  j["trajectory"] = trajectory_score_to_json(rec.score);
  j["termination_cause"] = std::string(termination_cause_name(rec.cause));
  return j;
}

void write_episode(const fs::path& dir, const EpisodeRecord& rec) {
  fs::create_directories(dir);
  std::string lines;
  for (const auto& t : rec.turns) {
    lines += write_json_line(turn_record_to_json(t), FloatFormat::RoundTrip);
    lines += '\n';
  }
  write_text_file_atomic(dir / "episode.jsonl", lines);
  write_text_file_atomic(dir / "summary.json", write_json(episode_summary_to_json(rec), FloatFormat::RoundTrip) + "\n");
}

EpisodeRecord read_episode(const fs::path& dir) {
  EpisodeRecord rec;
  try {
    const Json s = Json::parse(read_text_file(dir / "summary.json"));
    rec.instruction = s.at("instruction").get<std::string>();
    rec.seed = std::stoull(s.at("seed").get<std::string>());
    rec.requested_room_type = s.at("requested_room_type").get<std::string>();
    rec.config = EpisodeConfig::from_json(s.at("config"));
    rec.from_scratch = s.at("from_scratch").get<bool>();
    if (!s.at("r_init").is_null()) rec.r_init = s.at("r_init").get<double>();
    if (!s.at("init_scene").is_null()) rec.init_scene = scene_from_json(s.at("init_scene"));
    rec.mandatory = mandatory_from_json(s.at("mandatory"));
    rec.terminal_penalties = penalties_from_json(s.at("terminal_penalties"));
    if (!s.at("pre_opt_scene").is_null()) rec.pre_opt_scene = scene_from_json(s.at("pre_opt_scene"));
    if (!s.at("opt_report").is_null()) rec.opt_report_json = s.at("opt_report");
    rec.final_scene = scene_from_json(s.at("final_scene"));
    rec.consolidated = consolidated_from_json(s.at("consolidated"));
    rec.final_reward = final_reward_from_json(s.at("final_reward"));
    rec.score = trajectory_score_from_json(s.at("trajectory"));
    rec.cause = termination_cause_from_name(s.at("termination_cause").get<std::string>());

    std::istringstream in(read_text_file(dir / "episode.jsonl"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      rec.turns.push_back(turn_record_from_json(Json::parse(line)));
    }
    if (rec.turns.size() != s.at("turn_count").get<std::size_t>()) {
      throw Error(ErrorCode::MalformedJson, "episode.jsonl turn count does not match summary.json");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedJson, "episode record in " + dir.string() + ": " + e.what());
  }
  return rec;
}

}  // namespace scenechain
