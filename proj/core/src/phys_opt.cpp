#include "scenechain/phys_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace scenechain {

namespace {

bool placement_ok(const Scene& scene, const SceneObject& moved, const OptConfig& cfg) {
  if (oob_excess(moved, scene.room).max_excursion > cfg.physics.eps_oob) return false;
  const Obb box = obb_from_object(moved);
  for (const auto& other : scene.objects) {
    if (other.uid == moved.uid) continue;
    if (pair_penetration(box, obb_from_object(other)) > cfg.physics.eps_col) return false;
  }
  return true;
}

}  // namespace

std::string perturbation_target(const Scene& scene, const UidPair& pair) {
  const SceneObject* a = scene.find(pair.first);
  const SceneObject* b = scene.find(pair.second);
  if (a->volume() < b->volume()) return a->uid;
  if (b->volume() < a->volume()) return b->uid;
  return std::max(a->uid, b->uid);
}

ResolveResult resolve_collision(const Scene& scene, const std::string& target_uid, Rng& rng, const OptConfig& cfg) {
  const SceneObject* target = scene.find(target_uid);
  if (target == nullptr) return {};
  const Obb tbox = obb_from_object(*target);

  double worst = 0.0;
  double magnitude = 0.0;
  Vec2 axis{1.0, 0.0};
  for (const auto& other : scene.objects) {
    if (other.uid == target_uid) continue;
    const Penetration p = penetration(tbox, obb_from_object(other));
    if (p.depth <= cfg.physics.eps_col) continue;
    magnitude = std::max(magnitude, p.planar_depth);
    if (p.depth > worst) {
      worst = p.depth;
      axis = p.planar_axis;  // points from target towards the other box
    }
  }
  if (worst == 0.0) return {};
  magnitude += cfg.margin;

  std::vector<Vec2> directions{axis * -1.0, axis};
  const double phase = rng.uniform(0.0, std::numbers::pi / 3.0);
  for (int k = 0; k < 6; ++k) {
    const double a = phase + k * std::numbers::pi / 3.0;
    directions.push_back({std::cos(a), std::sin(a)});
  }
  for (double scale : {1.0, 2.0}) {
    for (const Vec2& d : directions) {
      SceneObject moved = *target;
      moved.position = quantize6(Vec3{target->position.x + d.x * magnitude * scale, target->position.y,
                                      target->position.z + d.z * magnitude * scale});
      if (placement_ok(scene, moved, cfg)) return {true, moved.position};
    }
  }
  return {};
}

OptResult optimize(const Scene& input, const OptConfig& cfg, Rng& rng) {
  OptResult out{input, {}};
  Scene& scene = out.scene;
  OptReport& rep = out.report;
  const Vec2 center = polygon_centroid(scene.room.footprint());

  for (int k = 1; k <= cfg.max_steps; ++k) {
    ++rep.steps_run;
    const ViolationReport head = check_physics(scene, cfg.physics);
    rep.violations_at_head.push_back(head.violation_count());
    if (head.clean()) break;

    // Phase 1: one fixed step towards the room center for every OOB object.
    for (const auto& uid : head.oob) {
      SceneObject* o = scene.find(uid);
      const Vec2 d{center.x - o->position.x, center.z - o->position.z};
      const double len = norm(d);
      if (len == 0.0) continue;
      const Vec3 from = o->position;
      o->position = quantize6(Vec3{from.x + cfg.oob_step * d.x / len, from.y, from.z + cfg.oob_step * d.z / len});
      rep.moved.push_back({uid, from, o->position, k, false});
    }

    // Phase 2: pairs are taken after the phase-1 moves so that collisions
    // those moves create are handled in the same iteration.
    const ViolationReport mid = head.oob.empty() ? head : check_physics(scene, cfg.physics);
    std::set<std::string> doomed;
    for (const auto& [pair, depth] : mid.pair_matrix) {
      if (doomed.count(pair.first) || doomed.count(pair.second)) continue;
      const SceneObject* a = scene.find(pair.first);
      const SceneObject* b = scene.find(pair.second);
      if (pair_penetration(obb_from_object(*a), obb_from_object(*b)) <= cfg.physics.eps_col) continue;
      const std::string target = perturbation_target(scene, pair);
      OptTarget audit{k, pair, target, a->volume(), b->volume(), false};
      const ResolveResult r = resolve_collision(scene, target, rng, cfg);
      if (r.success) {
        SceneObject* t = scene.find(target);
        rep.moved.push_back({target, t->position, *r.new_position, k, true});
        t->position = *r.new_position;
        audit.resolved = true;
      } else {
        doomed.insert(target);
      }
      rep.targets.push_back(std::move(audit));
    }

    // Phase 3
    if (!doomed.empty()) {
      std::erase_if(scene.objects, [&](const SceneObject& o) { return doomed.count(o.uid) != 0; });
      rep.deleted.insert(rep.deleted.end(), doomed.begin(), doomed.end());
    }
  }
  rep.residual = check_physics(scene, cfg.physics);
  return out;
}

Json opt_report_to_json(const OptReport& r) {
  Json j = Json::object();
  j["steps_run"] = r.steps_run;
  j["violations_at_head"] = r.violations_at_head;
  Json moved = Json::array();
  for (const auto& m : r.moved) {
    Json jm = Json::object();
    jm["uid"] = m.uid;
    jm["iteration"] = m.iteration;
    jm["reason"] = m.collision_fix ? "collision" : "out_of_bounds";
    jm["from"] = vec3_to_json(m.from);
    jm["to"] = vec3_to_json(m.to);
    moved.push_back(std::move(jm));
  }
  j["moved"] = std::move(moved);
  j["deleted"] = r.deleted;
  Json targets = Json::array();
  for (const auto& t : r.targets) {
    Json jt = Json::object();
    jt["iteration"] = t.iteration;
    jt["pair"] = Json::array({t.pair.first, t.pair.second});
    jt["target"] = t.target;
    jt["volumes"] = Json::array({t.volume_first, t.volume_second});
    jt["resolved"] = t.resolved;
    targets.push_back(std::move(jt));
  }
  j["targets"] = std::move(targets);
  j["residual"] = violation_report_to_json(r.residual);
  return j;
}

}  // namespace scenechain
