#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scenechain/metrics.hpp"
#include "scenechain/rng.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

struct OptConfig {
  int max_steps = 5;
  double oob_step = 0.2;        // m per iteration towards the room center
  double margin = 0.02;         // m added to the penetration when perturbing
  PhysicsConfig physics;
};

struct OptMove {
  std::string uid;
  Vec3 from;
  Vec3 to;
  int iteration = 0;
  bool collision_fix = false;  // false: out-of-bounds step
};

struct OptTarget {
  int iteration = 0;
  UidPair pair;
  std::string target;
  double volume_first = 0.0;
  double volume_second = 0.0;
  bool resolved = false;
};

struct OptReport {
  int steps_run = 0;
  std::vector<OptMove> moved;
  std::vector<std::string> deleted;
  std::vector<OptTarget> targets;
  std::vector<std::size_t> violations_at_head;  // |C| + |U| at each loop head
  ViolationReport residual;
};

struct OptResult {
  Scene scene;
  OptReport report;
};

OptResult optimize(const Scene& scene, const OptConfig& cfg, Rng& rng);

struct ResolveResult {
  bool success = false;
  std::optional<Vec3> new_position;
};

// Tries eight planar translations of the target (both ways along the
// separating axis of its deepest pair plus six directions 60 degrees apart),
// first by the deepest penetration plus the margin, then by twice that.
// Accepts the first one leaving the target collision-free and in bounds.
ResolveResult resolve_collision(const Scene& scene, const std::string& target_uid, Rng& rng,
                                const OptConfig& cfg = {});

// Smaller-volume member; on equal volume the lexicographically larger uid.
std::string perturbation_target(const Scene& scene, const UidPair& pair);

Json opt_report_to_json(const OptReport& report);

}  // namespace scenechain
