#include "scenechain/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenechain/agent_protocol.hpp"
#include "scenechain/error.hpp"
#include "scenechain/geometry.hpp"
#include "scenechain/png.hpp"
#include "placement.hpp"

namespace scenechain {

using detail::Mount;
using detail::MountRule;
using detail::Placer;
using detail::rule_for;

std::string_view obs_phase_name(ObsPhase phase) {
  switch (phase) {
    case ObsPhase::Init: return "init";
    case ObsPhase::Edit: return "edit";
    case ObsPhase::Terminal: return "terminal";
  }
  return "init";
}

ObsPhase obs_phase_from_name(std::string_view name) {
  if (name == "init") return ObsPhase::Init;
  if (name == "edit") return ObsPhase::Edit;
  if (name == "terminal") return ObsPhase::Terminal;
  throw Error(ErrorCode::MalformedJson, "unknown observation phase '" + std::string(name) + "'");
}

Json Observation::to_json(bool include_render) const {
  Json j = Json::object();
  j["instruction"] = instruction;
  j["scene_json"] = scene_json;
  if (include_render && render) {
    j["render_b64"] = base64_encode(*render);
    j["render_format"] = render_format;
  }
  j["render_present"] = render.has_value();
  j["render_failed"] = render_failed;
  Json hist = Json::array();
  for (const auto& h : history) hist.push_back(Json{{"turn", h.turn}, {"summary", h.summary}, {"r_t", h.r_t}});
  j["history"] = std::move(hist);
  j["turn"] = turn;
  j["phase"] = std::string(obs_phase_name(phase));
  return j;
}

namespace {

std::string terminate_response(const std::string& reason) {
  return format_edit_response("The layout is complete; no further edits are needed.",
                              {ToolCall{"call_end", Terminate{reason}}});
}

std::string requested_room(const AssetCatalog& catalog, const std::string& instruction) {
  auto m = catalog.match_room_type(instruction);
  return m ? *m : std::string(kDefaultRoomType);
}

}  // namespace

std::string ReplayPolicy::act(const Observation& obs) {
  if (obs.phase == ObsPhase::Init) {
    Scene empty;
    empty.room = chain_.final_scene.room;
    return format_init_response(empty);
  }
  const std::size_t index = static_cast<std::size_t>(std::max(0, obs.turn - 1));
  if (index >= chain_.turns.size()) return terminate_response("replay finished");
  const EditTurn& t = chain_.turns[index];
  return format_edit_response(t.cot_stub, t.forward_calls);
}

std::string RandomPolicy::act(const Observation& obs) {
  if (obs.phase == ObsPhase::Init) {
    const double w = rng_.uniform(3.0, 5.5);
    const double d = rng_.uniform(3.0, std::min(5.5, 30.0 / w));
    Scene s;
    s.room = make_rect_room(quantize6(w), quantize6(d), 2.8, requested_room(catalog_, obs.instruction), "random_room");
    return format_init_response(s);
  }
  const Scene scene = parse_scene_json(obs.scene_json);
  if (obs.turn >= 10 || rng_.uniform01() < 0.08) return terminate_response("random stop");
  const Polygon2 fp = scene.room.footprint();
  double x0 = fp[0].x, x1 = fp[0].x, z0 = fp[0].z, z1 = fp[0].z;
  for (const auto& p : fp) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    z0 = std::min(z0, p.z);
    z1 = std::max(z1, p.z);
  }
  std::vector<const AssetEntry*> pool;
  for (const auto& e : catalog_.entries()) {
    if (e.category != kGenericCategory) pool.push_back(&e);
  }
  std::vector<ToolCall> calls;
  const auto n = rng_.uniform_int(1, 3);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string id = "call_" + std::to_string(i);
    const bool has_objects = !scene.objects.empty();
    const auto kind = has_objects ? rng_.uniform_int(0, 4) : 0;
    const auto pick_uid = [&] {
      return scene.objects[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(scene.objects.size()) - 1))].uid;
    };
    if (kind == 0) {
      const AssetEntry& e = *pool[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
      const Vec3 size = e.canonical_size;
      calls.push_back({id, AddObject{e.category,
                                     quantize6(Vec3{rng_.uniform(x0, x1), 0.5 * size.y, rng_.uniform(z0, z1)}),
                                     quantize6(yaw_quaternion(rng_.uniform(-std::numbers::pi, std::numbers::pi))), size,
                                     std::nullopt}});
    } else if (kind == 1) {
      const std::string uid = pick_uid();
      const SceneObject* o = scene.find(uid);
      calls.push_back({id, MoveObject{uid, quantize6(Vec3{rng_.uniform(x0, x1), o->position.y, rng_.uniform(z0, z1)})}});
    } else if (kind == 2) {
      calls.push_back(
          {id, RotateObject{pick_uid(), quantize6(yaw_quaternion(rng_.uniform(-std::numbers::pi, std::numbers::pi)))}});
    } else if (kind == 3) {
      const std::string uid = pick_uid();
      const Vec3 s = scene.find(uid)->size;
      const double f = rng_.uniform(0.8, 1.2);
      calls.push_back({id, ScaleObject{uid, quantize6(Vec3{s.x * f, s.y * f, s.z * f})}});
    } else {
      calls.push_back({id, RemoveObject{pick_uid()}});
    }
  }
  return format_edit_response("Random exploration step.", calls);
}


RoomGeometry GreedyBuilderPolicy::room_for(std::string_view room_type) {
  struct Dims {
    std::string_view type;
    double w, d;
  };
  static constexpr Dims kDims[] = {{"bedroom", 4.5, 4.0},     {"living room", 5.5, 5.0}, {"dining room", 4.5, 4.5},
                                   {"study room", 4.0, 3.5},  {"office", 5.0, 4.5},      {"gym", 5.5, 5.0},
                                   {"entertainment room", 5.5, 5.2}, {"bathroom", 3.0, 2.6}, {"kitchen", 4.0, 3.5}};
  for (const auto& d : kDims) {
    if (d.type == room_type) return make_rect_room(d.w, d.d, 2.8, std::string(room_type), "greedy_" + std::string(room_type));
  }
  return make_rect_room(5.0, 5.0, 2.8, std::string(room_type), "greedy_room");
}

std::string GreedyBuilderPolicy::act(const Observation& obs) {
  if (obs.phase == ObsPhase::Init) {
    Scene s;
    s.room = room_for(requested_room(catalog_, obs.instruction));
    std::replace(s.room.room_id.begin(), s.room.room_id.end(), ' ', '_');
    return format_init_response(s);
  }
  const Scene scene = parse_scene_json(obs.scene_json);
  MandatoryObjects plan;
  try {
    plan = mandatory_objects(catalog_, scene.room.room_type, obs.instruction);
  } catch (const Error&) {
    return terminate_response("unknown room type");
  }

  std::map<std::string, int> missing;
  for (const auto& c : plan.items) ++missing[c];
  for (const auto& o : scene.objects) {
    auto it = missing.find(catalog_.category_of(o.description));
    if (it != missing.end() && it->second > 0) --it->second;
  }
  struct Item {
    std::string category;
    Mount mount;
    double area;
  };
  std::vector<Item> todo;
  for (const auto& c : plan.items) {
    int& left = missing[c];
    if (left <= 0) continue;
    --left;
    const auto entries = catalog_.entries_for(c);
    if (entries.empty()) continue;
    const MountRule* rule = rule_for(c);
    const Vec3 s = entries.front()->canonical_size;
    todo.push_back({c, rule ? rule->mount : Mount::Floor, s.x * s.z});
  }
  // Drop instances that already failed to find a spot.
  std::map<std::string, int> skip = unplaceable_;
  std::vector<Item> pending;
  for (const auto& it : todo) {
    if (skip[it.category] > 0) {
      --skip[it.category];
      continue;
    }
    pending.push_back(it);
  }
  std::stable_sort(pending.begin(), pending.end(), [](const Item& a, const Item& b) {
    if (a.mount != b.mount) return static_cast<int>(a.mount) < static_cast<int>(b.mount);
    return a.area > b.area;
  });
  if (pending.empty()) return terminate_response("all mandatory objects placed");

  Placer placer(scene, PhysicsConfig{});
  std::vector<ToolCall> calls;
  std::string think = "Spatial diagnosis: Spatial Distribution. Missing required objects: ";
  for (std::size_t i = 0; i < pending.size(); ++i) think += (i ? ", " : "") + pending[i].category;
  think += ". Plan: place the largest pieces first against the walls, then surface items and wall decor.";
  int temp = 0;
  for (const auto& it : pending) {
    if (static_cast<int>(calls.size()) >= adds_per_turn_) break;
    SceneObject o;
    o.uid = "__pending_" + std::to_string(temp++);
    o.description = it.category;
    o.size = catalog_.entries_for(it.category).front()->canonical_size;
    const MountRule* rule = rule_for(it.category);
    std::optional<SceneObject> placed;
    if (it.mount == Mount::Surface) placed = placer.on_host(o, *rule, catalog_);
    if (it.mount == Mount::Wall) placed = placer.on_wall(o, rule->center_height);
    if (!placed) placed = placer.on_floor(o);
    if (!placed) {
      ++unplaceable_[it.category];
      continue;
    }
    placer.add(*placed);
    calls.push_back({"call_" + std::to_string(calls.size()),
                     AddObject{it.category, placed->position, placed->rotation, placed->size, std::nullopt}});
  }
  if (calls.empty()) return terminate_response("no free space for the remaining objects");
  return format_edit_response(think, calls);
}

}  // namespace scenechain
