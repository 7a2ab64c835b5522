#include "scenechain/chain_synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "scenechain/error.hpp"
#include "scenechain/parallel.hpp"
#include "scenechain/transition.hpp"

namespace scenechain {

std::string_view edit_op_name(EditOp op) {
  switch (op) {
    case EditOp::Add: return "add";
    case EditOp::Move: return "move";
    case EditOp::Rotate: return "rotate";
    case EditOp::Scale: return "scale";
    case EditOp::Replace: return "replace";
    case EditOp::Remove: return "remove";
  }
  return "add";
}

void ChainConfig::validate() const {
  double sum = 0.0;
  for (double p : op_probs) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidConfig, "op probabilities must be non-negative");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidConfig, "op probabilities must sum to 1");
  if (!(0.0 < small_vol && small_vol <= large_vol)) throw Error(ErrorCode::InvalidConfig, "volume thresholds out of order");
  if (!(0.0 <= early_p && early_p <= late_p && late_p <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "progress thresholds out of order");
  }
  if (turns_min < 2 || turns_max < turns_min) throw Error(ErrorCode::InvalidConfig, "turn range must satisfy 2 <= min <= max");
}

ChainConfig ChainConfig::from_json(const Json& j) {
  ChainConfig c;
  try {
    if (j.contains("op_probs")) {
      const Json& p = j.at("op_probs");
      for (std::size_t i = 0; i < kEditOps.size(); ++i) {
        const std::string key(edit_op_name(kEditOps[i]));
        if (p.contains(key)) c.op_probs[i] = p.at(key).get<double>();
      }
    }
    c.small_vol = j.value("small_vol", c.small_vol);
    c.large_vol = j.value("large_vol", c.large_vol);
    c.early_p = j.value("early_p", c.early_p);
    c.late_p = j.value("late_p", c.late_p);
    c.turns_min = j.value("turns_min", c.turns_min);
    c.turns_max = j.value("turns_max", c.turns_max);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("chain config: ") + e.what());
  }
  c.validate();
  return c;
}

Json ChainConfig::to_json() const {
  Json probs = Json::object();
  for (std::size_t i = 0; i < kEditOps.size(); ++i) probs[std::string(edit_op_name(kEditOps[i]))] = op_probs[i];
  Json j = Json::object();
  j["op_probs"] = std::move(probs);
  j["small_vol"] = small_vol;
  j["large_vol"] = large_vol;
  j["early_p"] = early_p;
  j["late_p"] = late_p;
  j["turns_min"] = turns_min;
  j["turns_max"] = turns_max;
  j["seed"] = seed;
  return j;
}

namespace {

const std::array<std::string_view, 12> kModifiers{"modern", "vintage", "wooden",  "minimalist", "rustic", "industrial",
                                                  "classic", "compact", "walnut", "oak",        "velvet", "scandinavian"};

Vec2 random_point_in_room(const RoomGeometry& room, Rng& rng) {
  const Polygon2 fp = room.footprint();
  double x0 = fp[0].x, x1 = fp[0].x, z0 = fp[0].z, z1 = fp[0].z;
  for (const auto& p : fp) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Vec2 p{rng.uniform(x0, x1), rng.uniform(z0, z1)};
    if (point_in_polygon(p, fp)) return p;
  }
  return polygon_centroid(fp);
}

std::string modifier_variant(const std::string& description, Rng& rng) {
  const std::string norm = normalize_text(description);
  std::vector<std::string_view> options;
  for (auto m : kModifiers) {
    if (norm.find(m) == std::string::npos) options.push_back(m);
  }
  const auto pick = options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(options.size()) - 1))];
  return std::string(pick) + " " + description;
}

std::string call_id(std::size_t turn, std::size_t index) {
  return "call_" + std::to_string(turn) + "_" + std::to_string(index);
}

void erase_uid(Scene& s, const std::string& uid) {
  s.objects.erase(std::remove_if(s.objects.begin(), s.objects.end(), [&](const SceneObject& o) { return o.uid == uid; }),
                  s.objects.end());
}

void insert_sorted(Scene& s, SceneObject obj) {
  const auto pos = uid_insert_position(s, obj.uid);
  s.objects.insert(s.objects.begin() + static_cast<std::ptrdiff_t>(pos), std::move(obj));
}

ToolCall forward_add(const SceneObject& o) {
  return {"", AddObject{o.description, o.position, o.rotation, o.size, o.uid}};
}

std::string describe_call(const ToolCall& c, const Scene& before) {
  return std::visit(
      [&](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        auto label = [&](const std::string& uid) {
          const SceneObject* o = before.find(uid);
          return o ? o->description + " (" + uid + ")" : uid;
        };
        if constexpr (std::is_same_v<T, AddObject>) return "add " + p.object_description;
        else if constexpr (std::is_same_v<T, RemoveObject>) return "remove " + label(p.uid);
        else if constexpr (std::is_same_v<T, MoveObject>) return "move " + label(p.uid);
        else if constexpr (std::is_same_v<T, RotateObject>) return "rotate " + label(p.uid);
        else if constexpr (std::is_same_v<T, ScaleObject>) return "resize " + label(p.uid);
        else if constexpr (std::is_same_v<T, ReplaceObject>) return "replace " + label(p.uid_to_replace);
        else return "finish";
      },
      c.payload);
}

std::optional<std::string> target_uid(const ToolCall& c) {
  return std::visit(
      [](const auto& p) -> std::optional<std::string> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ReplaceObject>) return p.uid_to_replace;
        else if constexpr (std::is_same_v<T, AddObject> || std::is_same_v<T, Terminate>) return std::nullopt;
        else return p.uid;
      },
      c.payload);
}

std::string cot_stub(const Scene& before, const std::vector<ToolCall>& calls) {
  const ViolationReport report = check_physics(before);
  bool fixes_conflict = false;
  bool rearranges = false;
  for (const auto& c : calls) {
    if (auto uid = target_uid(c); uid && (report.colliding.count(*uid) || report.oob.count(*uid))) fixes_conflict = true;
    if (!std::holds_alternative<AddObject>(c.payload)) rearranges = true;
  }
  const char* bug = fixes_conflict ? "Physical Conflict" : rearranges ? "Layout Rationality" : "Spatial Distribution";
  std::string text = "Spatial diagnosis: ";
  text += bug;
  text += ". The room holds " + std::to_string(before.objects.size()) + " objects, " +
          std::to_string(report.colliding.size()) + " colliding and " + std::to_string(report.oob.size()) +
          " out of bounds. Plan: ";
  for (std::size_t i = 0; i < calls.size(); ++i) {
    if (i > 0) text += "; ";
    text += describe_call(calls[i], before);
  }
  text += ".";
  return text;
}

}  // namespace

AddCandidates add_candidates(std::span<const double> volumes, double progress, const ChainConfig& cfg) {
  AddCandidates out;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    const double v = volumes[i];
    const bool in = progress < cfg.early_p  ? v < cfg.small_vol
                    : progress < cfg.late_p ? (v >= cfg.small_vol && v < cfg.large_vol)
                                            : v >= cfg.large_vol;
    if (in) out.indices.push_back(i);
  }
  if (out.indices.empty()) {
    out.fallback = true;
    for (std::size_t i = 0; i < volumes.size(); ++i) out.indices.push_back(i);
  }
  return out;
}

ReverseChain dismantle(const Scene& final_scene, const ChainConfig& cfg, Rng& rng, const AssetCatalog& catalog) {
  if (final_scene.objects.empty()) throw Error(ErrorCode::EmptyScene, "cannot dismantle a scene without objects");
  ReverseChain out;
  const int T = static_cast<int>(rng.uniform_int(cfg.turns_min, cfg.turns_max));
  out.planned_turns = T;

  std::vector<const AssetEntry*> distractor_pool;
  for (const auto& e : catalog.entries()) {
    if (e.category != kGenericCategory) distractor_pool.push_back(&e);
  }
  int distractor_count = 0;

  Scene cur = final_scene;
  for (int t = 0; t < T; ++t) {
    const std::vector<SceneObject> objects = cur.objects;
    if (objects.empty()) break;
    const double p = static_cast<double>(t) / static_cast<double>(T - 1);
    Scene next = cur;
    std::vector<ToolCall> inverses;  // in reverse-application order

    if (t == T - 1) {
      for (const auto& o : objects) {
        inverses.push_back(forward_add(o));
        erase_uid(next, o.uid);
        out.edits.push_back({t, p, EditOp::Add, true, o.uid, o.volume(), true});
      }
    } else {
      const auto n = rng.uniform_int(1, static_cast<std::int64_t>(objects.size()));
      std::vector<const SceneObject*> available;
      for (const auto& o : objects) available.push_back(&o);
      auto take = [&](std::vector<const SceneObject*>& pool) {
        const auto idx = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
        const SceneObject* chosen = pool[idx];
        available.erase(std::find(available.begin(), available.end(), chosen));
        return chosen;
      };
      for (std::int64_t i = 0; i < n; ++i) {
        EditOp op = kEditOps[rng.weighted_index(cfg.op_probs)];
        if (op == EditOp::Add && next.objects.size() == 1) {
          // Keep one object for the last turn so the chain runs all T turns.
          std::array<double, 6> no_add = cfg.op_probs;
          no_add[0] = 0.0;
          if (std::all_of(no_add.begin(), no_add.end(), [](double w) { return w <= 0.0; })) continue;
          op = kEditOps[rng.weighted_index(no_add)];
        }
        if (op == EditOp::Remove) {
          const AssetEntry& e = *distractor_pool[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(distractor_pool.size()) - 1))];
          const Vec2 at = random_point_in_room(cur.room, rng);
          const double yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
          SceneObject d;
          do {
            d.uid = "distractor_" + std::to_string(++distractor_count);
          } while (next.find(d.uid) != nullptr);
          d.description = e.category;
          d.size = e.canonical_size;
          d.position = quantize6(Vec3{at.x, 0.5 * e.canonical_size.y, at.z});
          d.rotation = quantize6(yaw_quaternion(yaw));
          inverses.push_back({"", RemoveObject{d.uid}});
          out.edits.push_back({t, p, op, false, d.uid, d.volume(), false});
          insert_sorted(next, std::move(d));
          continue;
        }
        if (available.empty()) break;
        const SceneObject* o = nullptr;
        bool bucket_nonempty = false;
        if (op == EditOp::Add) {
          std::vector<double> volumes;
          for (const SceneObject* c : available) volumes.push_back(c->volume());
          const AddCandidates cand = add_candidates(volumes, p, cfg);
          std::vector<const SceneObject*> bucket;
          for (const std::size_t k : cand.indices) bucket.push_back(available[k]);
          bucket_nonempty = !cand.fallback;
          o = take(bucket);
        } else {
          o = take(available);
        }
        SceneObject* target = next.find(o->uid);
        switch (op) {
          case EditOp::Add:
            inverses.push_back(forward_add(*target));
            erase_uid(next, o->uid);
            break;
          case EditOp::Move: {
            inverses.push_back({"", MoveObject{o->uid, target->position}});
            const Vec2 at = random_point_in_room(cur.room, rng);
            target->position = quantize6(Vec3{at.x, target->position.y, at.z});
            break;
          }
          case EditOp::Rotate:
            inverses.push_back({"", RotateObject{o->uid, target->rotation}});
            target->rotation = quantize6(yaw_quaternion(rng.uniform(-std::numbers::pi, std::numbers::pi)));
            break;
          case EditOp::Scale: {
            inverses.push_back({"", ScaleObject{o->uid, target->size}});
            Vec3 s{target->size.x * rng.uniform(0.5, 1.5), target->size.y * rng.uniform(0.5, 1.5),
                   target->size.z * rng.uniform(0.5, 1.5)};
            if (auto range = catalog.category_range(catalog.category_of(target->description))) {
              const auto& [lo, hi] = *range;
              s = {std::clamp(s.x, 0.5 * lo.x, 2.0 * hi.x), std::clamp(s.y, 0.5 * lo.y, 2.0 * hi.y),
                   std::clamp(s.z, 0.5 * lo.z, 2.0 * hi.z)};
            }
            s = quantize6(s);
            s = {std::max(s.x, 1e-6), std::max(s.y, 1e-6), std::max(s.z, 1e-6)};
            target->size = s;
            break;
          }
          case EditOp::Replace:
            inverses.push_back({"", ReplaceObject{o->uid, target->description}});
            target->description = modifier_variant(target->description, rng);
            break;
          case EditOp::Remove:
            break;
        }
        out.edits.push_back({t, p, op, false, o->uid, o->volume(), bucket_nonempty});
      }
    }
    std::reverse(inverses.begin(), inverses.end());
    out.turns.push_back({std::move(cur), next, std::move(inverses)});
    cur = std::move(next);
  }
  return out;
}

EditChain invert(const ReverseChain& reverse, const Scene& final_scene, std::string scene_id, std::string instruction,
                 const AssetCatalog& catalog) {
  EditChain chain;
  chain.scene_id = std::move(scene_id);
  chain.instruction = std::move(instruction);
  chain.final_scene = final_scene;
  Scene state;
  state.room = final_scene.room;
  std::size_t turn = 0;
  for (auto it = reverse.turns.rbegin(); it != reverse.turns.rend(); ++it, ++turn) {
    EditTurn et;
    et.scene_before = state;
    et.forward_calls = it->forward_calls;
    for (std::size_t i = 0; i < et.forward_calls.size(); ++i) et.forward_calls[i].id = call_id(turn, i);
    BatchResult r = apply_tool_calls(state, et.forward_calls, catalog);
    et.scene_after = r.scene;
    et.cot_stub = cot_stub(et.scene_before, et.forward_calls);
    state = std::move(r.scene);
    chain.turns.push_back(std::move(et));
  }
  return chain;
}

Scene replay(const EditChain& chain, const AssetCatalog& catalog) {
  Scene state;
  state.room = chain.turns.empty() ? chain.final_scene.room : chain.turns.front().scene_before.room;
  for (std::size_t t = 0; t < chain.turns.size(); ++t) {
    for (const auto& call : chain.turns[t].forward_calls) {
      TransitionResult r = apply_tool_call(state, call, catalog);
      if (!r.penalties.empty()) {
        throw Error(ErrorCode::ReplayFailure,
                    "turn " + std::to_string(t) + " call " + call.id + ": " + r.penalties.front().detail);
      }
      state = std::move(r.scene);
    }
  }
  return state;
}

Scene normalize_scene(const Scene& scene, const AssetCatalog& catalog) {
  validate_scene(scene);
  Scene out;
  out.room = scene.room;
  for (const auto& o : scene.objects) {
    TransitionResult r = apply_tool_call(out, forward_add(o), catalog);
    if (!r.penalties.empty()) throw Error(ErrorCode::SceneRejected, "object " + o.uid + ": " + r.penalties.front().detail);
    out = std::move(r.scene);
  }
  return out;
}

std::string make_instruction(const Scene& scene, const AssetCatalog& catalog) {
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  for (const auto& o : scene.objects) {
    const std::string c = catalog.category_of(o.description);
    if (counts[c]++ == 0) order.push_back(c);
  }
  std::string room = scene.room.room_type.empty() ? std::string("room") : scene.room.room_type;
  std::string text = "Design a " + room;
  if (order.empty()) return text + ".";
  text += " with ";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) text += (i + 1 == order.size()) ? " and " : ", ";
    const int n = counts[order[i]];
    text += n == 1 ? "a " + order[i] : std::to_string(n) + " x " + order[i];
  }
  return text + ".";
}

Json chain_score_to_json(const ChainScore& s) {
  Json j = Json::object();
  j["coherence_score"] = s.coherence;
  j["naturalness_score"] = s.naturalness;
  j["instruction_following_score"] = s.instruction_following;
  j["visual_transition_score"] = s.visual_transition;
  j["overall_score"] = s.overall;
  j["reasoning"] = s.reasoning;
  j["strengths"] = s.strengths;
  j["weaknesses"] = s.weaknesses;
  return j;
}

ChainScore chain_score_from_json(const Json& j) {
  auto bounded = [&](const char* key, int hi) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
      throw Error(ErrorCode::NonConformingResponse, std::string("chain score needs integer ") + key);
    }
    const int v = j.at(key).get<int>();
    if (v < 0 || v > hi) throw Error(ErrorCode::NonConformingResponse, std::string(key) + " out of range");
    return v;
  };
  ChainScore s;
  s.coherence = bounded("coherence_score", 40);
  s.naturalness = bounded("naturalness_score", 35);
  s.instruction_following = bounded("instruction_following_score", 15);
  s.visual_transition = bounded("visual_transition_score", 10);
  s.overall = bounded("overall_score", 100);
  if (s.overall != s.coherence + s.naturalness + s.instruction_following + s.visual_transition) {
    throw Error(ErrorCode::NonConformingResponse, "overall_score is not the sum of the parts");
  }
  s.reasoning = j.value("reasoning", "");
  s.strengths = j.value("strengths", "");
  s.weaknesses = j.value("weaknesses", "");
  return s;
}

ChainScore MockChainJudge::score(const EditChain& chain) {
  ChainScore s;
  if (chain.turns.empty()) {
    s.reasoning = "empty chain";
    return s;
  }
  std::vector<std::string> target;
  try {
    target = mandatory_objects(catalog_, chain.final_scene.room.room_type, chain.instruction).items;
  } catch (const Error&) {
    for (const auto& o : chain.final_scene.objects) target.push_back(catalog_.category_of(o.description));
  }
  auto coverage = [&](const Scene& scene) {
    if (target.empty()) return 1.0;
    std::map<std::string, int> have;
    for (const auto& o : scene.objects) ++have[catalog_.category_of(o.description)];
    std::size_t found = 0;
    for (const auto& c : target) {
      if (have[c] > 0) {
        --have[c];
        ++found;
      }
    }
    return static_cast<double>(found) / static_cast<double>(target.size());
  };

  const std::size_t n = chain.turns.size();
  std::size_t prev_v = 0;
  double prev_cov = 0.0;
  std::size_t calm_turns = 0;
  std::size_t covering_turns = 0;
  std::size_t increase = 0;
  std::set<std::size_t> op_types;
  std::vector<double> lengths;
  for (const auto& turn : chain.turns) {
    const std::size_t v = check_physics(turn.scene_after, physics_).violation_count();
    if (v <= prev_v) ++calm_turns;
    else increase += v - prev_v;
    const double cov = coverage(turn.scene_after);
    if (cov >= prev_cov) ++covering_turns;
    prev_v = v;
    prev_cov = cov;
    for (const auto& c : turn.forward_calls) op_types.insert(c.payload.index());
    lengths.push_back(static_cast<double>(turn.forward_calls.size()));
  }
  double mean = 0.0;
  for (double l : lengths) mean += l;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double l : lengths) var += (l - mean) * (l - mean);
  var /= static_cast<double>(n);
  const double cv = mean > 0 ? std::sqrt(var) / mean : 0.0;
  const double diversity = std::min(1.0, static_cast<double>(op_types.size()) / 3.0);

  s.coherence = static_cast<int>(std::lround(40.0 * static_cast<double>(calm_turns) / static_cast<double>(n)));
  s.naturalness = static_cast<int>(std::lround(35.0 * (0.4 * diversity + 0.6 / (1.0 + cv))));
  s.instruction_following = static_cast<int>(
      std::lround(15.0 * (0.5 * prev_cov + 0.5 * static_cast<double>(covering_turns) / static_cast<double>(n))));
  s.visual_transition = static_cast<int>(std::lround(10.0 / (1.0 + static_cast<double>(increase))));
  s.overall = s.coherence + s.naturalness + s.instruction_following + s.visual_transition;
  s.reasoning = std::to_string(calm_turns) + "/" + std::to_string(n) + " turns without new violations; final coverage " +
                std::to_string(static_cast<int>(std::lround(100.0 * prev_cov))) + "%";
  s.strengths = op_types.size() >= 3 ? "varied edit types" : "simple, steady construction";
  s.weaknesses = increase > 0 ? "some turns introduce new violations" : (cv > 0.5 ? "uneven turn sizes" : "none noted");
  return s;
}

ChainScore score_chain(const EditChain& chain, ChainJudge& judge) { return judge.score(chain); }

EditChain synthesize_chain(const Scene& normalized, const std::string& scene_id, std::uint64_t seed,
                           const ChainConfig& cfg, const AssetCatalog& catalog, ReverseChain* reverse_out) {
  Rng rng(seed);
  ReverseChain rev = dismantle(normalized, cfg, rng, catalog);
  EditChain chain = invert(rev, normalized, scene_id, make_instruction(normalized, catalog), catalog);
  if (reverse_out != nullptr) *reverse_out = std::move(rev);
  return chain;
}

std::vector<SceneChains> synthesize_dataset(const std::vector<NamedScene>& scenes, const ChainConfig& cfg,
                                            const SynthOptions& opts, const ChainJudgeFactory& judge_factory,
                                            const AssetCatalog& catalog) {
  if (scenes.empty()) throw Error(ErrorCode::EmptyInput, "no scenes to synthesize from");
  if (opts.n_candidates < 1 || opts.keep < 1 || opts.keep > opts.n_candidates) {
    throw Error(ErrorCode::InvalidConfig, "need 1 <= keep <= candidates");
  }
  cfg.validate();
  std::vector<SceneChains> out(scenes.size());
  parallel_for(scenes.size(), opts.jobs, [&](std::size_t i) {
    const NamedScene& named = scenes[i];
    const Scene normalized = normalize_scene(named.scene, catalog);
    if (normalized.objects.empty()) throw Error(ErrorCode::EmptyScene, "scene " + named.id + " has no objects");
    const ViolationReport report = check_physics(normalized);
    if (!report.clean()) {
      throw Error(ErrorCode::SceneRejected, "scene " + named.id + " violates physical constraints (" +
                                                std::to_string(report.colliding.size()) + " colliding, " +
                                                std::to_string(report.oob.size()) + " out of bounds)");
    }
    auto judge = judge_factory();
    std::vector<ScoredChain> candidates;
    for (int k = 0; k < opts.n_candidates; ++k) {
      const std::uint64_t seed = derive_seed(cfg.seed, named.id, static_cast<std::uint64_t>(k));
      EditChain chain = synthesize_chain(normalized, named.id, seed, cfg, catalog);
      if (replay(chain, catalog) != normalized) {
        throw Error(ErrorCode::ReplayFailure, "scene " + named.id + " candidate " + std::to_string(k) +
                                                  " does not replay to its source scene");
      }
      ChainScore score = score_chain(chain, *judge);
      candidates.push_back({k, seed, std::move(chain), std::move(score)});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const ScoredChain& a, const ScoredChain& b) { return a.score.overall > b.score.overall; });
    candidates.resize(static_cast<std::size_t>(opts.keep));
    out[i] = {named.id, std::move(candidates)};
  });
  return out;
}

}  // namespace scenechain
