#include "placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace scenechain::detail {

namespace {

constexpr double kGridStep = 0.1;

const std::vector<MountRule>& mount_rules() {
  static const std::vector<MountRule> rules{
      {"lamp", Mount::Surface, {"nightstand", "side table", "desk", "dresser"}, 0.0},
      {"desk lamp", Mount::Surface, {"desk", "gaming desk"}, 0.0},
      {"tv", Mount::Surface, {"tv stand", "sideboard", "dresser", "cabinet"}, 0.0},
      {"gaming console", Mount::Surface, {"tv stand", "sideboard", "cabinet"}, 0.0},
      {"laptop", Mount::Surface, {"desk", "gaming desk", "conference table"}, 0.0},
      {"vase", Mount::Surface, {"side table", "coffee table", "sideboard", "dining table"}, 0.0},
      {"mirror", Mount::Wall, {}, 1.3},
      {"painting", Mount::Wall, {}, 1.6},
      {"whiteboard", Mount::Wall, {}, 1.4},
      {"wall shelf", Mount::Wall, {}, 1.6},
      {"clock", Mount::Wall, {}, 1.9},
  };
  return rules;
}

struct Bounds {
  double x0, x1, z0, z1;
};

Bounds bounds_of(const Polygon2& fp) {
  Bounds b{fp[0].x, fp[0].x, fp[0].z, fp[0].z};
  for (const auto& p : fp) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.z0 = std::min(b.z0, p.z);
    b.z1 = std::max(b.z1, p.z);
  }
  return b;
}

}  // namespace

const MountRule* rule_for(const std::string& category) {
  for (const auto& r : mount_rules()) {
    if (r.category == category) return &r;
  }
  return nullptr;
}

Mount mount_of(const std::string& category) {
  const MountRule* r = rule_for(category);
  return r ? r->mount : Mount::Floor;
}

bool Placer::fits(const SceneObject& o, double clearance) const {
  if (oob_excess(o, scene_.room).max_excursion > 1e-5) return false;
  Obb box = obb_from_object(o);
  box.half_extents.x += clearance;
  box.half_extents.z += clearance;
  for (const auto& other : scene_.objects) {
    if (pair_penetration(box, obb_from_object(other)) > 0.0) return false;
  }
  return true;
}

std::optional<SceneObject> Placer::on_floor(SceneObject o) const {
  const Polygon2 fp = scene_.room.footprint();
  const Bounds b = bounds_of(fp);
  std::optional<SceneObject> best;
  double best_score = 0.0;
  for (double yaw : {0.0, std::numbers::pi / 2.0}) {
    o.rotation = quantize6(yaw_quaternion(yaw));
    const int nx = static_cast<int>(std::floor((b.x1 - b.x0) / kGridStep));
    const int nz = static_cast<int>(std::floor((b.z1 - b.z0) / kGridStep));
    for (int i = 0; i <= nx; ++i) {
      for (int k = 0; k <= nz; ++k) {
        o.position = quantize6(Vec3{b.x0 + i * kGridStep, 0.5 * o.size.y, b.z0 + k * kGridStep});
        if (!fits(o, clearance_)) continue;
        double wall_gap = std::numeric_limits<double>::infinity();
        for (const Vec2& c : footprint_corners(obb_from_object(o))) wall_gap = std::min(wall_gap, distance_to_boundary(c, fp));
        if (!best || wall_gap < best_score - 1e-9) {
          best = o;
          best_score = wall_gap;
        }
      }
    }
  }
  return best;
}

std::optional<SceneObject> Placer::on_floor_random(SceneObject o, Rng& rng, int tries) const {
  const Bounds b = bounds_of(scene_.room.footprint());
  for (int i = 0; i < tries; ++i) {
    const double yaw = rng.uniform01() < 0.8 ? (std::numbers::pi / 2.0) * static_cast<double>(rng.uniform_int(-2, 1))
                                             : rng.uniform(-std::numbers::pi, std::numbers::pi);
    o.rotation = quantize6(yaw_quaternion(yaw));
    o.position = quantize6(Vec3{rng.uniform(b.x0, b.x1), 0.5 * o.size.y, rng.uniform(b.z0, b.z1)});
    if (fits(o, clearance_)) return o;
  }
  return std::nullopt;
}

std::optional<SceneObject> Placer::on_host(SceneObject o, const MountRule& rule, const AssetCatalog& catalog,
                                           Rng* rng) const {
  for (const auto host_cat : rule.hosts) {
    std::vector<const SceneObject*> hosts;
    for (const auto& host : scene_.objects) {
      if (catalog.category_of(host.description) == host_cat && !occupied(host)) hosts.push_back(&host);
    }
    if (rng) rng->shuffle(hosts);
    for (const SceneObject* host : hosts) {
      o.rotation = host->rotation;
      o.position = quantize6(Vec3{host->position.x, host->top() + 0.5 * o.size.y, host->position.z});
      if (fits(o, 0.0)) return o;
    }
  }
  return std::nullopt;
}

std::optional<SceneObject> Placer::on_wall(SceneObject o, double center_height, Rng* rng) const {
  if (center_height + 0.5 * o.size.y > scene_.room.ceiling_height()) {
    center_height = scene_.room.ceiling_height() - 0.5 * o.size.y - 0.05;
  }
  const Polygon2 fp = counter_clockwise(scene_.room.footprint());
  std::vector<std::size_t> edges(fp.size());
  for (std::size_t e = 0; e < fp.size(); ++e) edges[e] = e;
  if (rng) rng->shuffle(edges);
  for (const std::size_t e : edges) {
    const Vec2 a = fp[e];
    const Vec2 b = fp[(e + 1) % fp.size()];
    const double len = norm(b - a);
    if (len < o.size.x + 0.2) continue;
    const Vec2 dir = (b - a) * (1.0 / len);
    const Vec2 inward{-dir.z, dir.x};
    o.rotation = quantize6(yaw_quaternion(std::atan2(inward.x, inward.z)));
    const double lo = 0.5 * o.size.x + 0.1;
    const double hi = len - 0.5 * o.size.x - 0.1;
    const int steps = static_cast<int>(std::floor((hi - lo) / kGridStep + 1e-9));
    const int offset = rng ? static_cast<int>(rng->uniform_int(0, steps)) : 0;
    for (int s = 0; s <= steps; ++s) {
      const double t = lo + kGridStep * ((s + offset) % (steps + 1));
      const Vec2 c = a + dir * t + inward * (0.5 * o.size.z + 1e-4);
      o.position = quantize6(Vec3{c.x, center_height, c.z});
      if (fits(o, clearance_)) return o;
    }
  }
  return std::nullopt;
}

bool Placer::occupied(const SceneObject& host) const {
  const Polygon2 host_fp = footprint_polygon(obb_from_object(host));
  for (const auto& other : scene_.objects) {
    if (other.uid == host.uid || std::fabs(other.bottom() - host.top()) > physics_.eps_support) continue;
    if (point_in_polygon({other.position.x, other.position.z}, host_fp)) return true;
  }
  return false;
}

}  // namespace scenechain::detail
