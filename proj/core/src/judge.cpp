#include "scenechain/judge.hpp"

#include <algorithm>
#include <cmath>

namespace scenechain {

double quantize_half(double v) { return std::clamp(std::round(v * 2.0) / 2.0, -1.0, 1.0); }

double mandatory_coverage(const Scene& scene, const std::vector<std::string>& mandatory, const AssetCatalog& catalog) {
  if (mandatory.empty()) return 1.0;
  const PresenceCheck p = mandatory_presence(scene, mandatory, std::nullopt, catalog);
  return static_cast<double>(p.found) / static_cast<double>(p.total);
}

int MockJudge::improvement(const Scene& before, const Scene& after, const JudgeContext& ctx) {
  if (before == after) return -1;
  const std::size_t v0 = check_physics(before, physics_).violation_count();
  const std::size_t v1 = check_physics(after, physics_).violation_count();
  const double c0 = mandatory_coverage(before, ctx.mandatory, catalog_);
  const double c1 = mandatory_coverage(after, ctx.mandatory, catalog_);
  if (v1 < v0) return 1;
  if (c1 > c0 && v1 <= v0) return 1;
  if (v1 > v0 || c1 < c0) return -1;
  return 0;
}

MandatoryObjects MockJudge::mandatory(const std::string& instruction, const std::string& room_type) {
  return mandatory_objects(catalog_, room_type, instruction);
}

bool MockJudge::fits_room(const std::string& category, const JudgeContext& ctx) const {
  if (std::find(ctx.mandatory.begin(), ctx.mandatory.end(), category) != ctx.mandatory.end()) return true;
  std::string room = normalize_text(ctx.room_type);
  if (auto m = catalog_.match_room_type(room)) room = *m;
  if (const auto* common = catalog_.common_for(room)) {
    if (std::find(common->begin(), common->end(), category) != common->end()) return true;
  }
  const auto mentioned = catalog_.categories_mentioned(ctx.instruction);
  return std::find(mentioned.begin(), mentioned.end(), category) != mentioned.end();
}

RelevanceVerdict MockJudge::relevance(const std::vector<std::string>& added, const JudgeContext& ctx) {
  RelevanceVerdict v;
  for (const auto& d : added) {
    const std::string cat = catalog_.category_of(d);
    (cat != kGenericCategory && fits_room(cat, ctx) ? v.relevant : v.irrelevant).push_back(d);
  }
  return v;
}

ConsolidatedScores MockJudge::consolidated(const Scene& scene, const JudgeContext& ctx) {
  ConsolidatedScores s;
  const ViolationReport report = check_physics(scene, physics_);
  const SceneRatios r = scene_ratios(report, scene);
  s.rationality = quantize_half(1.0 - 2.0 * (r.r_col + r.r_oob + r.r_unsup) / 100.0);
  s.requirement_match = quantize_half(2.0 * mandatory_coverage(scene, ctx.mandatory, catalog_) - 1.0);
  if (scene.objects.empty()) {
    s.scene_graph = -1.0;
  } else {
    std::size_t fitting = 0;
    for (const auto& o : scene.objects) {
      const std::string cat = catalog_.category_of(o.description);
      if (cat != kGenericCategory && fits_room(cat, ctx) && size_valid(catalog_, cat, o.size)) ++fitting;
    }
    s.scene_graph = quantize_half(2.0 * static_cast<double>(fitting) / static_cast<double>(scene.objects.size()) - 1.0);
  }
  return s;
}

}  // namespace scenechain
