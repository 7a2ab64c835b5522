#include "scenechain/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenechain {

Obb obb_from_object(const SceneObject& obj) {
  return {obj.position, obj.yaw(), {0.5 * obj.size.x, 0.5 * obj.size.y, 0.5 * obj.size.z}};
}

namespace {

// Local x axis of a yaw-rotated box expressed in the floor plane. A yaw of
// theta about +y maps local x to (cos, -sin) in (x, z).
Vec2 local_x(double yaw) { return {std::cos(yaw), -std::sin(yaw)}; }
Vec2 local_z(double yaw) { return {std::sin(yaw), std::cos(yaw)}; }

double projected_radius(const Obb& box, Vec2 axis) {
  return box.half_extents.x * std::fabs(dot(local_x(box.yaw), axis)) +
         box.half_extents.z * std::fabs(dot(local_z(box.yaw), axis));
}

double vertical_overlap(const Obb& a, const Obb& b) {
  const double lo = std::max(a.center.y - a.half_extents.y, b.center.y - b.half_extents.y);
  const double hi = std::min(a.center.y + a.half_extents.y, b.center.y + b.half_extents.y);
  return hi - lo;
}

}  // namespace

std::array<Vec2, 4> footprint_corners(const Obb& box) {
  const Vec2 c{box.center.x, box.center.z};
  const Vec2 ux = local_x(box.yaw) * box.half_extents.x;
  const Vec2 uz = local_z(box.yaw) * box.half_extents.z;
  std::array<Vec2, 4> pts{c - ux - uz, c + ux - uz, c + ux + uz, c - ux + uz};
  if (signed_area(pts) < 0) std::reverse(pts.begin(), pts.end());
  return pts;
}

Polygon2 footprint_polygon(const Obb& box) {
  const auto pts = footprint_corners(box);
  return Polygon2(pts.begin(), pts.end());
}

Penetration penetration(const Obb& a, const Obb& b) {
  Penetration out;
  const double vy = vertical_overlap(a, b);
  if (vy <= 0.0) return out;
  const Vec2 d{b.center.x - a.center.x, b.center.z - a.center.z};
  const std::array<Vec2, 4> axes{local_x(a.yaw), local_z(a.yaw), local_x(b.yaw), local_z(b.yaw)};
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_axis{1.0, 0.0};
  for (const Vec2& axis : axes) {
    const double dist = dot(d, axis);
    const double overlap = projected_radius(a, axis) + projected_radius(b, axis) - std::fabs(dist);
    if (overlap <= 0.0) return out;
    if (overlap < best) {
      best = overlap;
      best_axis = dist < 0 ? axis * -1.0 : axis;
    }
  }
  out.planar_depth = best;
  out.planar_axis = best_axis;
  out.vertical = vy < best;
  out.depth = std::min(best, vy);
  return out;
}

double pair_penetration(const Obb& a, const Obb& b) {
  // Evaluate in a canonical argument order so the result is bit-symmetric.
  const auto key = [](const Obb& o) {
    return std::array<double, 7>{o.center.x, o.center.y, o.center.z, o.yaw,
                                 o.half_extents.x, o.half_extents.y, o.half_extents.z};
  };
  return key(a) <= key(b) ? penetration(a, b).depth : penetration(b, a).depth;
}

double intersection_volume(const Obb& a, const Obb& b) {
  const double vy = vertical_overlap(a, b);
  if (vy <= 0.0) return 0.0;
  const auto pa = footprint_corners(a);
  const auto pb = footprint_corners(b);
  return polygon_area(clip_to_convex(pa, pb)) * vy;
}

OobExcess oob_excess(const SceneObject& obj, const RoomGeometry& room) {
  OobExcess out;
  const Obb box = obb_from_object(obj);
  const Polygon2 room_fp = room.footprint();
  const auto corners = footprint_corners(box);
  for (const Vec2& p : corners) {
    if (!point_in_polygon(p, room_fp)) out.max_excursion = std::max(out.max_excursion, distance_to_boundary(p, room_fp));
  }
  const double lo = std::max(0.0, obj.bottom());
  const double hi = std::min(room.ceiling_height(), obj.top());
  const double clipped_height = std::max(0.0, hi - lo);
  const double area = obj.size.x * obj.size.z;
  const double inside = intersection_area_with_convex(room_fp, corners);
  double outside_area = area - inside;
  if (outside_area < 1e-12 * std::max(1.0, area)) outside_area = 0.0;
  if (out.max_excursion == 0.0 && outside_area > 0.0) {
    // All corners inside a non-convex room, but a reflex wall corner pokes
    // into the footprint: report how far it reaches into the box.
    const Polygon2 fp_poly(corners.begin(), corners.end());
    for (const Vec2& v : room_fp) {
      if (point_in_polygon(v, fp_poly)) out.max_excursion = std::max(out.max_excursion, distance_to_boundary(v, fp_poly));
    }
  }
  out.oob_volume = outside_area * clipped_height;
  return out;
}

std::string_view support_kind_name(SupportKind kind) {
  switch (kind) {
    case SupportKind::Floor: return "floor";
    case SupportKind::Surface: return "surface";
    case SupportKind::Wall: return "wall";
    case SupportKind::Unsupported: return "unsupported";
  }
  return "unsupported";
}

SupportStatus support_status(const SceneObject& obj, const Scene& scene, const PhysicsConfig& cfg) {
  if (std::fabs(obj.bottom()) <= cfg.eps_support) return {SupportKind::Floor, std::nullopt};

  const Obb box = obb_from_object(obj);
  const auto fp = footprint_corners(box);
  const double area = obj.size.x * obj.size.z;
  const SceneObject* supporter = nullptr;
  double best_overlap = 0.0;
  for (const auto& other : scene.objects) {
    if (other.uid == obj.uid) continue;
    if (std::fabs(obj.bottom() - other.top()) > cfg.eps_support) continue;
    const double inter = polygon_area(clip_to_convex(fp, footprint_corners(obb_from_object(other))));
    const double frac = area > 0 ? inter / area : 0.0;
    if (frac >= cfg.min_support_overlap && frac > best_overlap) {
      best_overlap = frac;
      supporter = &other;
    }
  }
  if (supporter != nullptr) return {SupportKind::Surface, supporter->uid};

  if (obj.bottom() > 0.0) {
    const Polygon2 room = scene.room.footprint();
    for (std::size_t e = 0; e < 4; ++e) {
      const Vec2 p = fp[e];
      const Vec2 q = fp[(e + 1) % 4];
      for (std::size_t w = 0; w < room.size(); ++w) {
        const Vec2 a = room[w];
        const Vec2 b = room[(w + 1) % room.size()];
        if (point_segment_distance(p, a, b) <= cfg.eps_support && point_segment_distance(q, a, b) <= cfg.eps_support) {
          return {SupportKind::Wall, std::nullopt};
        }
      }
    }
  }
  return {SupportKind::Unsupported, std::nullopt};
}

}  // namespace scenechain
