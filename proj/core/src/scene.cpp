#include "scenechain/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "scenechain/error.hpp"

namespace scenechain {

double RoomGeometry::ceiling_height() const {
  return bounds_top.empty() ? 0.0 : bounds_top.front().y;
}

Polygon2 RoomGeometry::footprint() const {
  Polygon2 poly;
  poly.reserve(bounds_bottom.size());
  for (const auto& v : bounds_bottom) poly.push_back({v.x, v.z});
  return poly;
}

double SceneObject::yaw() const { return quaternion_yaw(rotation); }

const SceneObject* Scene::find(std::string_view uid) const {
  for (const auto& o : objects) {
    if (o.uid == uid) return &o;
  }
  return nullptr;
}

SceneObject* Scene::find(std::string_view uid) {
  for (auto& o : objects) {
    if (o.uid == uid) return &o;
  }
  return nullptr;
}

double quantize6(double v) {
  const double q = std::round(v * 1e6) / 1e6;
  return q == 0.0 ? 0.0 : q;
}

Vec3 quantize6(const Vec3& v) { return {quantize6(v.x), quantize6(v.y), quantize6(v.z)}; }

Quat quantize6(const Quat& q) {
  return {quantize6(q[0]), quantize6(q[1]), quantize6(q[2]), quantize6(q[3])};
}

double normalize_angle(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  double out = a - std::numbers::pi;
  if (out >= std::numbers::pi) out -= two_pi;
  return out;
}

Quat yaw_quaternion(double yaw) {
  return {0.0, std::sin(0.5 * yaw), 0.0, std::cos(0.5 * yaw)};
}

double quaternion_yaw(const Quat& q) { return normalize_angle(2.0 * std::atan2(q[1], q[3])); }

bool is_yaw_quaternion(const Quat& q) {
  for (double c : q) {
    if (!std::isfinite(c)) return false;
  }
  const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  return std::fabs(n - 1.0) <= 1e-6 && std::fabs(q[0]) <= 1e-6 && std::fabs(q[2]) <= 1e-6;
}

RotationCheck canonical_rotation(const Quat& q) {
  if (is_yaw_quaternion(q)) return {quantize6(q), false};
  for (double c : q) {
    if (!std::isfinite(c)) throw Error(ErrorCode::InvariantViolation, "rotation has non-finite component");
  }
  const double len = std::hypot(q[1], q[3]);
  if (len < 1e-9) {
    throw Error(ErrorCode::InvariantViolation, "rotation has no yaw component to project onto");
  }
  const double yaw = 2.0 * std::atan2(q[1] / len, q[3] / len);
  return {quantize6(yaw_quaternion(yaw)), true};
}

RoomGeometry make_rect_room(double width, double depth, double height, std::string room_type,
                            std::string room_id, double origin_x, double origin_z) {
  const Polygon2 fp{{origin_x, origin_z},
                    {origin_x + width, origin_z},
                    {origin_x + width, origin_z + depth},
                    {origin_x, origin_z + depth}};
  return make_polygon_room(fp, height, std::move(room_type), std::move(room_id));
}

RoomGeometry make_polygon_room(const Polygon2& footprint, double height, std::string room_type,
                               std::string room_id) {
  RoomGeometry room;
  for (const auto& p : footprint) {
    room.bounds_bottom.push_back(quantize6(Vec3{p.x, 0.0, p.z}));
    room.bounds_top.push_back(quantize6(Vec3{p.x, height, p.z}));
  }
  room.room_type = std::move(room_type);
  room.room_id = std::move(room_id);
  return room;
}

namespace {

bool finite3(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

[[noreturn]] void invariant(const std::string& what) {
  throw Error(ErrorCode::InvariantViolation, what);
}

}  // namespace

void validate_room(const RoomGeometry& room) {
  const auto& top = room.bounds_top;
  const auto& bottom = room.bounds_bottom;
  if (top.size() < 3 || bottom.size() < 3) invariant("room bounds need at least 3 vertices");
  if (top.size() != bottom.size()) invariant("bounds_top and bounds_bottom differ in length");
  const double ceiling = top.front().y;
  if (!(ceiling > 0.0)) invariant("ceiling height must be positive");
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (!finite3(top[i]) || !finite3(bottom[i])) invariant("room bounds contain non-finite values");
    if (std::fabs(bottom[i].y) > 1e-9) invariant("bounds_bottom must lie on y = 0");
    if (std::fabs(top[i].y - ceiling) > 1e-9) invariant("bounds_top must share one ceiling height");
    if (std::fabs(top[i].x - bottom[i].x) > 1e-9 || std::fabs(top[i].z - bottom[i].z) > 1e-9) {
      invariant("bounds_top and bounds_bottom footprints differ");
    }
  }
  if (!is_simple_polygon(room.footprint())) invariant("room footprint is not a simple polygon");
}

void validate_object(const SceneObject& obj) {
  if (obj.uid.empty()) invariant("object uid is empty");
  if (!finite3(obj.position) || !finite3(obj.size)) invariant("object " + obj.uid + " has non-finite values");
  if (!(obj.size.x > 0.0 && obj.size.y > 0.0 && obj.size.z > 0.0)) {
    invariant("object " + obj.uid + " has non-positive size");
  }
  if (!is_yaw_quaternion(obj.rotation)) invariant("object " + obj.uid + " rotation is not a unit yaw quaternion");
}

void validate_scene(const Scene& scene) {
  validate_room(scene.room);
  std::set<std::string_view> seen;
  for (const auto& o : scene.objects) {
    validate_object(o);
    if (!seen.insert(o.uid).second) invariant("duplicate uid " + o.uid);
  }
}

double room_area(const RoomGeometry& room) {
  const Polygon2 fp = room.footprint();
  const double a = polygon_area(fp);
  if (fp.size() < 3 || !(a > 1e-12)) throw Error(ErrorCode::DegeneratePolygon, "room footprint has zero area");
  if (!is_simple_polygon(fp)) throw Error(ErrorCode::DegeneratePolygon, "room footprint self-intersects");
  return a;
}

Json vec3_to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Json quat_to_json(const Quat& q) { return Json::array({q[0], q[1], q[2], q[3]}); }

Json scene_to_json(const Scene& scene) {
  Json j = Json::object();
  Json top = Json::array();
  for (const auto& v : scene.room.bounds_top) top.push_back(vec3_to_json(v));
  Json bottom = Json::array();
  for (const auto& v : scene.room.bounds_bottom) bottom.push_back(vec3_to_json(v));
  j["bounds_top"] = std::move(top);
  j["bounds_bottom"] = std::move(bottom);
  j["room_type"] = scene.room.room_type;
  j["room_id"] = scene.room.room_id;
  Json objects = Json::array();
  for (const auto& o : scene.objects) {
    Json jo = Json::object();
    jo["uid"] = o.uid;
    jo["description"] = o.description;
    jo["position"] = vec3_to_json(o.position);
    jo["rotation"] = quat_to_json(o.rotation);
    jo["size"] = vec3_to_json(o.size);
    objects.push_back(std::move(jo));
  }
  j["objects"] = std::move(objects);
  return j;
}

namespace {

const Json& require(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::MissingField, key);
  return *it;
}

double number_at(const Json& arr, std::size_t i, const std::string& what) {
  if (!arr[i].is_number()) invariant(what + " must contain numbers");
  const double v = arr[i].get<double>();
  if (!std::isfinite(v)) invariant(what + " contains a non-finite value");
  return v;
}

Vec3 vec3_from(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) invariant(what + " must be an array of 3 numbers");
  return quantize6(Vec3{number_at(j, 0, what), number_at(j, 1, what), number_at(j, 2, what)});
}

std::string string_from(const Json& j, const std::string& what) {
  if (!j.is_string()) invariant(what + " must be a string");
  return j.get<std::string>();
}

}  // namespace

Scene scene_from_json(const Json& j, std::vector<std::string>* warnings) {
  if (!j.is_object()) invariant("scene must be a JSON object");
  const Json& top = require(j, "bounds_top");
  const Json& bottom = require(j, "bounds_bottom");
  const Json& room_type = require(j, "room_type");
  const Json& room_id = require(j, "room_id");
  const Json& objects = require(j, "objects");
  if (!top.is_array() || !bottom.is_array()) invariant("bounds must be arrays of points");
  if (!objects.is_array()) invariant("objects must be an array");

  Scene scene;
  for (const auto& p : top) scene.room.bounds_top.push_back(vec3_from(p, "bounds_top vertex"));
  for (const auto& p : bottom) scene.room.bounds_bottom.push_back(vec3_from(p, "bounds_bottom vertex"));
  scene.room.room_type = string_from(room_type, "room_type");
  scene.room.room_id = room_id.is_number() ? room_id.dump() : string_from(room_id, "room_id");

  for (const auto& jo : objects) {
    if (!jo.is_object()) invariant("objects entries must be JSON objects");
    SceneObject o;
    if (jo.contains("uid")) {
      o.uid = string_from(jo["uid"], "uid");
    } else if (jo.contains("jid")) {
      o.uid = string_from(jo["jid"], "jid");
    } else {
      throw Error(ErrorCode::MissingField, "uid");
    }
    o.description = string_from(require(jo, "description"), "description");
    o.position = vec3_from(require(jo, "position"), "position");
    const Json& rot = require(jo, "rotation");
    if (!rot.is_array() || rot.size() != 4) invariant("rotation must be a quaternion [x, y, z, w]");
    Quat q{number_at(rot, 0, "rotation"), number_at(rot, 1, "rotation"), number_at(rot, 2, "rotation"),
           number_at(rot, 3, "rotation")};
    const RotationCheck rc = canonical_rotation(q);
    if (rc.projected && warnings != nullptr) {
      warnings->push_back("object " + o.uid + ": rotation projected onto yaw-only quaternion");
    }
    o.rotation = rc.rotation;
    o.size = vec3_from(require(jo, "size"), "size");
    scene.objects.push_back(std::move(o));
  }
  validate_scene(scene);
  return scene;
}

Scene parse_scene_json(std::string_view text, std::vector<std::string>* warnings) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  return scene_from_json(j, warnings);
}

std::string serialize_scene(const Scene& scene) {
  return write_json(scene_to_json(scene), FloatFormat::Fixed6);
}

std::size_t uid_insert_position(const Scene& scene, std::string_view uid) {
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    if (scene.objects[i].uid > uid) return i;
  }
  return scene.objects.size();
}

}  // namespace scenechain
