#pragma once

#include <array>
#include <optional>
#include <string>

#include "scenechain/polygon2d.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

struct PhysicsConfig {
  double eps_col = 0.01;        // m, penetration tolerance
  double eps_oob = 0.001;       // m, boundary excursion tolerance
  double eps_support = 0.02;    // m, contact gap for support classification
  double min_support_overlap = 0.5;
};

struct Obb {
  Vec3 center;
  double yaw = 0.0;  // [-pi, pi)
  Vec3 half_extents;
};

Obb obb_from_object(const SceneObject& obj);

// Footprint rectangle, counter-clockwise.
std::array<Vec2, 4> footprint_corners(const Obb& box);
Polygon2 footprint_polygon(const Obb& box);

struct Penetration {
  double depth = 0.0;       // minimum translation distance, 0 when separated
  double planar_depth = 0.0;  // smallest overlap over the four footprint axes
  Vec2 planar_axis;         // unit axis of planar_depth, pointing from a to b
  bool vertical = false;    // the minimum overlap is along y
};

Penetration penetration(const Obb& a, const Obb& b);
double pair_penetration(const Obb& a, const Obb& b);

// Volume of the intersection of two boxes.
double intersection_volume(const Obb& a, const Obb& b);

struct OobExcess {
  double max_excursion = 0.0;  // m
  double oob_volume = 0.0;     // m^3
};

OobExcess oob_excess(const SceneObject& obj, const RoomGeometry& room);

enum class SupportKind { Floor, Surface, Wall, Unsupported };

struct SupportStatus {
  SupportKind kind = SupportKind::Unsupported;
  std::optional<std::string> supporter_uid;

  friend bool operator==(const SupportStatus&, const SupportStatus&) = default;
};

std::string_view support_kind_name(SupportKind kind);

SupportStatus support_status(const SceneObject& obj, const Scene& scene, const PhysicsConfig& cfg = {});

}  // namespace scenechain
