#include "scenechain/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "scenechain/error.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/policy.hpp"
#include "scenechain/transition.hpp"
#include "placement.hpp"

namespace scenechain {

using detail::Mount;

std::vector<std::string> fixture_room_types(const AssetCatalog& catalog) {
  std::vector<std::string> out;
  for (const auto& [room, items] : catalog.mandatory_by_room()) out.push_back(room);
  return out;
}

namespace {

RoomGeometry fixture_room(std::string_view room_type, Rng& rng, const FixtureOptions& opts, const std::string& id) {
  const RoomGeometry base = GreedyBuilderPolicy::room_for(room_type);
  const Polygon2 fp = base.footprint();
  double w = 0.0, d = 0.0;
  for (const auto& p : fp) {
    w = std::max(w, p.x);
    d = std::max(d, p.z);
  }
  w = quantize6(std::round(w * rng.uniform(1.0, 1.15) * 10.0) / 10.0);
  d = quantize6(std::round(d * rng.uniform(1.0, 1.15) * 10.0) / 10.0);
  while (w * d > 29.0) w = quantize6(w - 0.1);
  if (rng.uniform01() < opts.l_shape_probability) {
    // Notch out a corner, keeping the area close to the base room.
    const double cw = quantize6(std::round(w * 0.3 * 10.0) / 10.0);
    const double cd = quantize6(std::round(d * 0.3 * 10.0) / 10.0);
    const double W = quantize6(w + 0.5);
    const Polygon2 l{{0.0, 0.0}, {W, 0.0}, {W, d - cd}, {W - cw, d - cd}, {W - cw, d}, {0.0, d}};
    return make_polygon_room(l, 2.8, std::string(room_type), id);
  }
  return make_rect_room(w, d, 2.8, std::string(room_type), id);
}

std::vector<std::string> fixture_items(std::string_view room_type, Rng& rng, const AssetCatalog& catalog,
                                       const FixtureOptions& opts) {
  std::vector<std::string> items = mandatory_objects(catalog, room_type, "").items;
  const auto target = static_cast<std::size_t>(rng.uniform_int(opts.min_objects, opts.max_objects));
  std::vector<std::string> extras;
  if (const auto* common = catalog.common_for(room_type)) extras = *common;
  for (const char* decor : {"plant", "painting", "clock", "floor lamp"}) {
    if (catalog.has_category(decor)) extras.emplace_back(decor);
  }
  std::erase_if(extras, [&](const std::string& c) { return c == kGenericCategory || !catalog.has_category(c); });
  if (extras.empty()) return items;
  // Pad past the target; some placements fail in crowded rooms.
  while (items.size() < target + 3) {
    items.push_back(extras[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(extras.size()) - 1))]);
  }
  return items;
}

std::optional<Scene> try_fixture(std::string_view room_type, Rng& rng, const AssetCatalog& catalog,
                                 const FixtureOptions& opts, const std::string& id) {
  Scene scene;
  scene.room = fixture_room(room_type, rng, opts, id);
  const std::vector<std::string> items = fixture_items(room_type, rng, catalog, opts);
  const auto target = static_cast<std::size_t>(rng.uniform_int(opts.min_objects, opts.max_objects));

  struct Pending {
    std::string category;
    Mount mount;
    Vec3 size;
  };
  std::vector<Pending> pending;
  for (const auto& c : items) {
    const auto entries = catalog.entries_for(c);
    if (entries.empty()) continue;
    const AssetEntry* e = entries[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(entries.size()) - 1))];
    pending.push_back({c, detail::mount_of(c), e->canonical_size});
  }
  // Mandatory items come first in `items`; keep that priority within each mount class.
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) { return static_cast<int>(a.mount) < static_cast<int>(b.mount); });

  detail::Placer placer(scene, PhysicsConfig{});
  for (const auto& p : pending) {
    if (placer.scene().objects.size() >= target) break;
    SceneObject o;
    o.uid = fresh_uid(placer.scene(), p.category);
    o.description = p.category;
    o.size = p.size;
    std::optional<SceneObject> placed;
    if (p.mount == Mount::Surface) placed = placer.on_host(o, *detail::rule_for(p.category), catalog, &rng);
    if (p.mount == Mount::Wall) placed = placer.on_wall(o, detail::rule_for(p.category)->center_height, &rng);
    if (!placed) placed = placer.on_floor_random(o, rng);
    if (placed) placer.add(*placed);
  }
  scene = placer.scene();
  if (scene.objects.size() < static_cast<std::size_t>(opts.min_objects)) return std::nullopt;
  std::sort(scene.objects.begin(), scene.objects.end(),
            [](const SceneObject& a, const SceneObject& b) { return a.uid < b.uid; });
  if (!check_physics(scene).clean()) return std::nullopt;
  return scene;
}

}  // namespace

Scene make_fixture_scene(std::string_view room_type, std::uint64_t seed, const AssetCatalog& catalog,
                         const FixtureOptions& opts) {
  const std::string canonical = catalog.match_room_type(room_type).value_or(std::string(room_type));
  if (!catalog.mandatory_by_room().count(canonical)) {
    throw Error(ErrorCode::UnknownRoomType, "no fixture recipe for room type '" + std::string(room_type) + "'");
  }
  std::string id = "fixture_" + canonical;
  std::replace(id.begin(), id.end(), ' ', '_');
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(derive_seed(seed, canonical, static_cast<std::uint64_t>(attempt)));
    if (auto scene = try_fixture(canonical, rng, catalog, opts, id)) return *scene;
  }
  throw Error(ErrorCode::SceneRejected, "could not lay out a clean " + canonical + " fixture");
}

std::vector<NamedScene> make_fixture_set(std::size_t n, std::uint64_t seed, const AssetCatalog& catalog,
                                         const FixtureOptions& opts) {
  const std::vector<std::string> rooms = fixture_room_types(catalog);
  std::vector<NamedScene> out;
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "fixture_%03zu", i);
    Scene s = make_fixture_scene(rooms[i % rooms.size()], derive_seed(seed, id, 0), catalog, opts);
    s.room.room_id = id;
    out.push_back({id, std::move(s)});
  }
  return out;
}

std::string_view goal_variant_name(GoalVariant v) {
  switch (v) {
    case GoalVariant::Chaotic: return "chaotic";
    case GoalVariant::Missing: return "missing";
    case GoalVariant::ChaoticMissing: return "chaotic_missing";
  }
  return "chaotic";
}

GoalVariant goal_variant_from_name(std::string_view name) {
  if (name == "chaotic") return GoalVariant::Chaotic;
  if (name == "missing") return GoalVariant::Missing;
  if (name == "chaotic_missing") return GoalVariant::ChaoticMissing;
  throw Error(ErrorCode::InvalidConfig, "unknown goal variant '" + std::string(name) + "'");
}

Scene make_goal_scene(const Scene& clean, GoalVariant variant, std::uint64_t seed, const AssetCatalog& catalog) {
  ChainConfig cfg;
  switch (variant) {
    case GoalVariant::Chaotic: cfg.op_probs = {0.0, 0.45, 0.40, 0.15, 0.0, 0.0}; break;
    case GoalVariant::Missing: cfg.op_probs = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}; break;
    case GoalVariant::ChaoticMissing: cfg.op_probs = {0.4, 0.3, 0.3, 0.0, 0.0, 0.0}; break;
  }
  cfg.turns_min = cfg.turns_max = 4;
  Rng rng(seed);
  const ReverseChain reverse = dismantle(clean, cfg, rng, catalog);
  return reverse.turns.front().scene_after;
}

Scene jitter_scene(const Scene& clean, Rng& rng, int moves, double max_offset) {
  Scene s = clean;
  if (s.objects.empty()) return s;
  for (int i = 0; i < moves; ++i) {
    SceneObject& o = s.objects[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(s.objects.size()) - 1))];
    o.position = quantize6(Vec3{o.position.x + rng.uniform(-max_offset, max_offset), o.position.y,
                                o.position.z + rng.uniform(-max_offset, max_offset)});
  }
  return s;
}

}  // namespace scenechain
