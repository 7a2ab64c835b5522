#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "scenechain/geometry.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

using UidPair = std::pair<std::string, std::string>;  // first < second

struct ViolationReport {
  std::set<std::string> colliding;
  std::set<std::string> oob;
  std::map<UidPair, double> pair_matrix;  // penetration > eps_col only
  std::map<std::string, OobExcess> per_object_excess;
  std::set<std::string> unsupported;

  std::size_t violation_count() const { return colliding.size() + oob.size(); }
  bool clean() const { return colliding.empty() && oob.empty(); }
};

ViolationReport check_physics(const Scene& scene, const PhysicsConfig& cfg = {});

struct SceneRatios {
  double r_col = 0.0;    // percent
  double r_oob = 0.0;    // percent
  double d_pen = 0.0;    // m
  double v_oob = 0.0;    // m^3
  double r_unsup = 0.0;  // percent
};

SceneRatios scene_ratios(const ViolationReport& report, const Scene& scene);

// Total physical-violation volume in liters: pairwise box intersections of
// reported pairs plus out-of-bounds volume.
double violation_volume_liters(const ViolationReport& report, const Scene& scene);

struct SceneMetric {
  double oob_fraction = 0.0;
  double col_fraction = 0.0;
  double vbl = 0.0;  // liters
};

struct DatasetMetrics {
  double obr = 0.0;
  double cnr = 0.0;
  double vbl = 0.0;  // liters, mean per scene
  std::size_t scene_count = 0;
  std::vector<SceneMetric> per_scene;
};

// Throws EmptyInput for an empty list.
DatasetMetrics aggregate(const std::vector<std::pair<ViolationReport, Scene>>& reports);

Json violation_report_to_json(const ViolationReport& report);
Json scene_ratios_to_json(const SceneRatios& ratios);

}  // namespace scenechain
