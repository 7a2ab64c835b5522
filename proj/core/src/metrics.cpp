#include "scenechain/metrics.hpp"

#include <algorithm>

#include "scenechain/error.hpp"

namespace scenechain {

ViolationReport check_physics(const Scene& scene, const PhysicsConfig& cfg) {
  ViolationReport r;
  std::vector<Obb> boxes;
  boxes.reserve(scene.objects.size());
  for (const auto& o : scene.objects) boxes.push_back(obb_from_object(o));

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      const double d = pair_penetration(boxes[i], boxes[j]);
      if (d <= cfg.eps_col) continue;
      const auto& a = scene.objects[i].uid;
      const auto& b = scene.objects[j].uid;
      r.pair_matrix[a < b ? UidPair{a, b} : UidPair{b, a}] = d;
      r.colliding.insert(a);
      r.colliding.insert(b);
    }
  }
  for (const auto& o : scene.objects) {
    const OobExcess ex = oob_excess(o, scene.room);
    r.per_object_excess[o.uid] = ex;
    if (ex.max_excursion > cfg.eps_oob) r.oob.insert(o.uid);
    if (support_status(o, scene, cfg).kind == SupportKind::Unsupported) r.unsupported.insert(o.uid);
  }
  return r;
}

SceneRatios scene_ratios(const ViolationReport& report, const Scene& scene) {
  const double n = static_cast<double>(std::max<std::size_t>(scene.objects.size(), 1));
  SceneRatios s;
  s.r_col = 100.0 * static_cast<double>(report.colliding.size()) / n;
  s.r_oob = 100.0 * static_cast<double>(report.oob.size()) / n;
  s.r_unsup = 100.0 * static_cast<double>(report.unsupported.size()) / n;
  for (const auto& [pair, d] : report.pair_matrix) s.d_pen += d;
  for (const auto& [uid, ex] : report.per_object_excess) s.v_oob += ex.oob_volume;
  return s;
}

double violation_volume_liters(const ViolationReport& report, const Scene& scene) {
  double v = 0.0;
  for (const auto& [pair, d] : report.pair_matrix) {
    const SceneObject* a = scene.find(pair.first);
    const SceneObject* b = scene.find(pair.second);
    if (a != nullptr && b != nullptr) v += intersection_volume(obb_from_object(*a), obb_from_object(*b));
  }
  for (const auto& [uid, ex] : report.per_object_excess) v += ex.oob_volume;
  return v * 1000.0;
}

namespace {

// Mean taken as offsets from the first value, so M identical values average to
// exactly that value.
double anchored_mean(const std::vector<double>& v) {
  double offset = 0.0;
  for (const double x : v) offset += x - v.front();
  return v.front() + offset / static_cast<double>(v.size());
}

}  // namespace

DatasetMetrics aggregate(const std::vector<std::pair<ViolationReport, Scene>>& reports) {
  if (reports.empty()) throw Error(ErrorCode::EmptyInput, "aggregate needs at least one scene");
  DatasetMetrics m;
  m.scene_count = reports.size();
  std::vector<double> obr, cnr, vbl;
  for (const auto& [report, scene] : reports) {
    const double n = static_cast<double>(std::max<std::size_t>(scene.objects.size(), 1));
    SceneMetric s;
    s.oob_fraction = static_cast<double>(report.oob.size()) / n;
    s.col_fraction = static_cast<double>(report.colliding.size()) / n;
    s.vbl = violation_volume_liters(report, scene);
    obr.push_back(s.oob_fraction);
    cnr.push_back(s.col_fraction);
    vbl.push_back(s.vbl);
    m.per_scene.push_back(s);
  }
  m.obr = anchored_mean(obr);
  m.cnr = anchored_mean(cnr);
  m.vbl = anchored_mean(vbl);
  return m;
}

Json violation_report_to_json(const ViolationReport& report) {
  Json j = Json::object();
  j["colliding"] = report.colliding;
  j["oob"] = report.oob;
  Json pairs = Json::array();
  for (const auto& [pair, d] : report.pair_matrix) {
    Json p = Json::object();
    p["a"] = pair.first;
    p["b"] = pair.second;
    p["penetration"] = d;
    pairs.push_back(std::move(p));
  }
  j["pair_matrix"] = std::move(pairs);
  Json excess = Json::object();
  for (const auto& [uid, ex] : report.per_object_excess) {
    Json e = Json::object();
    e["max_excursion"] = ex.max_excursion;
    e["oob_volume"] = ex.oob_volume;
    excess[uid] = std::move(e);
  }
  j["per_object_excess"] = std::move(excess);
  j["unsupported"] = report.unsupported;
  return j;
}

Json scene_ratios_to_json(const SceneRatios& r) {
  Json j = Json::object();
  j["r_col"] = r.r_col;
  j["r_oob"] = r.r_oob;
  j["d_pen"] = r.d_pen;
  j["v_oob"] = r.v_oob;
  j["r_unsup"] = r.r_unsup;
  return j;
}

}  // namespace scenechain
