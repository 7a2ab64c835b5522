#pragma once

#include <string>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/rewards.hpp"
#include "scenechain/scene.hpp"

namespace scenechain {

struct JudgeContext {
  std::string instruction;
  std::string room_type;
  std::vector<std::string> mandatory;
};

struct RelevanceVerdict {
  std::vector<std::string> relevant;
  std::vector<std::string> irrelevant;
};

// Scene evaluator used for the semantic reward terms. Implementations must
// return values from the documented sets; transport problems are thrown as
// JudgeTransport errors.
class Judge {
 public:
  virtual ~Judge() = default;
  // -1, 0 or 1
  virtual int improvement(const Scene& before, const Scene& after, const JudgeContext& ctx) = 0;
  virtual MandatoryObjects mandatory(const std::string& instruction, const std::string& room_type) = 0;
  virtual RelevanceVerdict relevance(const std::vector<std::string>& added_descriptions, const JudgeContext& ctx) = 0;
  virtual ConsolidatedScores consolidated(const Scene& scene, const JudgeContext& ctx) = 0;
};

// Deterministic rule-based judge.
class MockJudge : public Judge {
 public:
  explicit MockJudge(const AssetCatalog& catalog, PhysicsConfig physics = {})
      : catalog_(catalog), physics_(physics) {}

  int improvement(const Scene& before, const Scene& after, const JudgeContext& ctx) override;
  MandatoryObjects mandatory(const std::string& instruction, const std::string& room_type) override;
  RelevanceVerdict relevance(const std::vector<std::string>& added_descriptions, const JudgeContext& ctx) override;
  ConsolidatedScores consolidated(const Scene& scene, const JudgeContext& ctx) override;

 private:
  bool fits_room(const std::string& category, const JudgeContext& ctx) const;

  const AssetCatalog& catalog_;
  PhysicsConfig physics_;
};

// Nearest of {-1, -0.5, 0, 0.5, 1}.
double quantize_half(double v);

// Fraction of the mandatory multiset present in the scene.
double mandatory_coverage(const Scene& scene, const std::vector<std::string>& mandatory, const AssetCatalog& catalog);

}  // namespace scenechain
