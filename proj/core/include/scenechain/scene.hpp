#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenechain/canonical_json.hpp"
#include "scenechain/polygon2d.hpp"

namespace scenechain {

// World frame: y is up, the floor is y = 0, positions are box centers, meters.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Quaternion stored as [x, y, z, w]. Objects are upright boxes, so only
// rotations about +y are representable.
using Quat = std::array<double, 4>;

struct RoomGeometry {
  std::vector<Vec3> bounds_top;
  std::vector<Vec3> bounds_bottom;
  std::string room_type;
  std::string room_id;

  double ceiling_height() const;
  Polygon2 footprint() const;

  friend bool operator==(const RoomGeometry&, const RoomGeometry&) = default;
};

struct SceneObject {
  std::string uid;
  std::string description;
  Vec3 position;
  Quat rotation{0.0, 0.0, 0.0, 1.0};
  Vec3 size;  // full extents: width (local x), height (y), depth (local z)

  double yaw() const;
  double volume() const { return size.x * size.y * size.z; }
  double bottom() const { return position.y - 0.5 * size.y; }
  double top() const { return position.y + 0.5 * size.y; }

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct Scene {
  RoomGeometry room;
  std::vector<SceneObject> objects;

  const SceneObject* find(std::string_view uid) const;
  SceneObject* find(std::string_view uid);

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Values are canonicalized to the 6-decimal grid of the wire format so that
// serialize/parse round-trips are field-exact.
double quantize6(double v);
Vec3 quantize6(const Vec3& v);
Quat quantize6(const Quat& q);

Quat yaw_quaternion(double yaw);
// Yaw in [-pi, pi).
double quaternion_yaw(const Quat& q);
double normalize_angle(double radians);

struct RotationCheck {
  Quat rotation;
  bool projected = false;  // input was not a unit yaw quaternion and was snapped
};

// Keeps valid yaw quaternions verbatim; projects others onto the nearest
// yaw-only rotation. Throws InvariantViolation when no projection exists.
RotationCheck canonical_rotation(const Quat& q);
bool is_yaw_quaternion(const Quat& q);

RoomGeometry make_rect_room(double width, double depth, double height, std::string room_type,
                            std::string room_id, double origin_x = 0.0, double origin_z = 0.0);
RoomGeometry make_polygon_room(const Polygon2& footprint, double height, std::string room_type,
                               std::string room_id);

void validate_room(const RoomGeometry& room);
void validate_object(const SceneObject& obj);
void validate_scene(const Scene& scene);

// Floor area of the footprint (shoelace). Throws DegeneratePolygon for
// zero-area or self-intersecting footprints.
double room_area(const RoomGeometry& room);

Json vec3_to_json(const Vec3& v);
Json quat_to_json(const Quat& q);
Json scene_to_json(const Scene& scene);
Scene scene_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);

Scene parse_scene_json(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string serialize_scene(const Scene& scene);

// Objects are kept in uid order by the transition function; this returns the
// index at which a new uid is inserted (before the first greater uid).
std::size_t uid_insert_position(const Scene& scene, std::string_view uid);

}  // namespace scenechain
