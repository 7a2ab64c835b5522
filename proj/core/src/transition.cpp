#include "scenechain/transition.hpp"

#include <algorithm>
#include <cmath>

#include "scenechain/error.hpp"

namespace scenechain {

namespace {

constexpr double kAspectTolerance = 1e-4;

bool same_proportions(const Vec3& a, const Vec3& b) {
  const double lx = std::log(a.x / b.x);
  const double ly = std::log(a.y / b.y);
  const double lz = std::log(a.z / b.z);
  const double spread = std::max({lx, ly, lz}) - std::min({lx, ly, lz});
  return spread <= kAspectTolerance;
}

bool valid_size(const Vec3& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z) && s.x > 0 && s.y > 0 && s.z > 0;
}

std::string underscored(std::string_view text) {
  std::string out(text);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

TransitionResult reject(const Scene& scene, PenaltyKind kind, std::string detail) {
  TransitionResult r{scene, {}, {}, std::nullopt};
  r.penalties.push_back({kind, std::move(detail)});
  return r;
}

TransitionResult apply_unchecked(const Scene& scene, const ToolCall& call, const AssetCatalog& catalog);

}  // namespace

Vec3 instantiated_size(const AssetCatalog& catalog, std::string_view description, const Vec3& target) {
  const std::string category = catalog.category_of(description);
  if (category == kGenericCategory) return quantize6(target);
  for (const auto* e : catalog.entries_for(category)) {
    if (same_proportions(e->canonical_size, target)) return quantize6(target);
  }
  const AssetEntry& asset = retrieve(catalog, description, target);
  const Vec3& c = asset.canonical_size;
  const double scale = std::cbrt((target.x / c.x) * (target.y / c.y) * (target.z / c.z));
  Vec3 snapped = quantize6(Vec3{c.x * scale, c.y * scale, c.z * scale});
  // 6-decimal rounding must not collapse a tiny request to zero.
  snapped.x = std::max(snapped.x, 1e-6);
  snapped.y = std::max(snapped.y, 1e-6);
  snapped.z = std::max(snapped.z, 1e-6);
  return snapped;
}

std::string fresh_uid(const Scene& scene, std::string_view category) {
  const std::string stem = underscored(category);
  for (int n = 1;; ++n) {
    std::string uid = stem + "_" + std::to_string(n);
    if (scene.find(uid) == nullptr) return uid;
  }
}

TransitionResult apply_tool_call(const Scene& scene, const ToolCall& call, const AssetCatalog& catalog) {
  try {
    return apply_unchecked(scene, call, catalog);
  } catch (const Error& e) {
    return reject(scene, PenaltyKind::MissingParams, std::string(call.name()) + ": " + e.what());
  }
}

namespace {

TransitionResult apply_unchecked(const Scene& scene, const ToolCall& call, const AssetCatalog& catalog) {
  return std::visit(
      [&](const auto& p) -> TransitionResult {
        using T = std::decay_t<decltype(p)>;
        TransitionResult r{scene, {}, {}, std::nullopt};
        if constexpr (std::is_same_v<T, AddObject>) {
          if (!valid_size(p.size)) return reject(scene, PenaltyKind::MissingParams, "add_object: non-positive size");
          std::string uid;
          if (p.uid) {
            if (p.uid->empty() || scene.find(*p.uid) != nullptr) {
              return reject(scene, PenaltyKind::InvalidId, "add_object: uid '" + *p.uid + "' already in use");
            }
            uid = *p.uid;
          } else {
            uid = fresh_uid(scene, catalog.category_of(p.object_description));
          }
          const RotationCheck rc = canonical_rotation(p.rotation);
          if (rc.projected) r.warnings.push_back("add_object: rotation projected onto yaw");
          SceneObject obj{uid, p.object_description, quantize6(p.position), rc.rotation,
                          instantiated_size(catalog, p.object_description, p.size)};
          r.scene.objects.insert(r.scene.objects.begin() + static_cast<std::ptrdiff_t>(uid_insert_position(scene, uid)),
                                 std::move(obj));
          r.affected_uid = uid;
        } else if constexpr (std::is_same_v<T, RemoveObject>) {
          auto it = std::find_if(r.scene.objects.begin(), r.scene.objects.end(),
                                 [&](const SceneObject& o) { return o.uid == p.uid; });
          if (it == r.scene.objects.end()) return reject(scene, PenaltyKind::InvalidId, "remove_object: unknown uid '" + p.uid + "'");
          r.scene.objects.erase(it);
          r.affected_uid = p.uid;
        } else if constexpr (std::is_same_v<T, MoveObject>) {
          SceneObject* o = r.scene.find(p.uid);
          if (o == nullptr) return reject(scene, PenaltyKind::InvalidId, "move_object: unknown uid '" + p.uid + "'");
          o->position = quantize6(p.new_position);
          r.affected_uid = p.uid;
        } else if constexpr (std::is_same_v<T, RotateObject>) {
          SceneObject* o = r.scene.find(p.uid);
          if (o == nullptr) return reject(scene, PenaltyKind::InvalidId, "rotate_object: unknown uid '" + p.uid + "'");
          const RotationCheck rc = canonical_rotation(p.new_rotation);
          if (rc.projected) r.warnings.push_back("rotate_object: rotation projected onto yaw");
          o->rotation = rc.rotation;
          r.affected_uid = p.uid;
        } else if constexpr (std::is_same_v<T, ScaleObject>) {
          if (!valid_size(p.new_size)) return reject(scene, PenaltyKind::MissingParams, "scale_object: non-positive size");
          SceneObject* o = r.scene.find(p.uid);
          if (o == nullptr) return reject(scene, PenaltyKind::InvalidId, "scale_object: unknown uid '" + p.uid + "'");
          o->size = quantize6(p.new_size);
          r.affected_uid = p.uid;
        } else if constexpr (std::is_same_v<T, ReplaceObject>) {
          SceneObject* o = r.scene.find(p.uid_to_replace);
          if (o == nullptr) {
            return reject(scene, PenaltyKind::InvalidId, "replace_object: unknown uid '" + p.uid_to_replace + "'");
          }
          o->size = instantiated_size(catalog, p.new_object_description, o->size);
          o->description = p.new_object_description;
          r.affected_uid = p.uid_to_replace;
        }
        return r;
      },
      call.payload);
}

}  // namespace

BatchResult apply_tool_calls(const Scene& scene, const std::vector<ToolCall>& calls, const AssetCatalog& catalog) {
  BatchResult out{scene, {}, {}, {}, false};
  for (const auto& call : calls) {
    if (call.is_terminate()) {
      out.terminated = true;
      break;
    }
    TransitionResult r = apply_tool_call(out.scene, call, catalog);
    const bool ok = r.penalties.empty();
    out.penalties.insert(out.penalties.end(), r.penalties.begin(), r.penalties.end());
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    if (ok && r.affected_uid &&
        (std::holds_alternative<AddObject>(call.payload) || std::holds_alternative<ReplaceObject>(call.payload))) {
      out.added_uids.push_back(*r.affected_uid);
    }
    out.scene = std::move(r.scene);
  }
  return out;
}

}  // namespace scenechain
