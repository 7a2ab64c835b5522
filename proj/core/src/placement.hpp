#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/geometry.hpp"
#include "scenechain/rng.hpp"
#include "scenechain/scene.hpp"

namespace scenechain::detail {

enum class Mount { Floor, Surface, Wall };

struct MountRule {
  std::string_view category;
  Mount mount;
  std::vector<std::string_view> hosts;  // surface items
  double center_height = 0.0;           // wall items
};

const MountRule* rule_for(const std::string& category);
Mount mount_of(const std::string& category);

// Collision-aware placement against a working copy of a scene.
class Placer {
 public:
  Placer(const Scene& scene, const PhysicsConfig& physics, double clearance = 0.05)
      : scene_(scene), physics_(physics), clearance_(clearance) {}

  bool fits(const SceneObject& o, double clearance) const;

  // Grid scan; picks the spot closest to a wall, ties in scan order.
  std::optional<SceneObject> on_floor(SceneObject o) const;
  // Rejection sampling at random positions, preferring axis-aligned yaws.
  std::optional<SceneObject> on_floor_random(SceneObject o, Rng& rng, int tries = 300) const;
  std::optional<SceneObject> on_host(SceneObject o, const MountRule& rule, const AssetCatalog& catalog,
                                     Rng* rng = nullptr) const;
  std::optional<SceneObject> on_wall(SceneObject o, double center_height, Rng* rng = nullptr) const;

  void add(SceneObject o) { scene_.objects.push_back(std::move(o)); }
  const Scene& scene() const { return scene_; }

 private:
  bool occupied(const SceneObject& host) const;

  Scene scene_;
  PhysicsConfig physics_;
  double clearance_;
};

}  // namespace scenechain::detail
