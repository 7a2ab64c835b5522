#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "scenechain/assets.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/rng.hpp"
#include "scenechain/scene.hpp"
#include "scenechain/tool_call.hpp"

namespace scenechain {

enum class EditOp { Add, Move, Rotate, Scale, Replace, Remove };
inline constexpr std::array<EditOp, 6> kEditOps{EditOp::Add,   EditOp::Move,    EditOp::Rotate,
                                                EditOp::Scale, EditOp::Replace, EditOp::Remove};

std::string_view edit_op_name(EditOp op);

struct ChainConfig {
  // Indexed like kEditOps.
  std::array<double, 6> op_probs{0.35, 0.20, 0.20, 0.05, 0.10, 0.10};
  double small_vol = 0.5;
  double large_vol = 2.0;
  double early_p = 0.3;
  double late_p = 0.7;
  int turns_min = 4;
  int turns_max = 8;
  std::uint64_t seed = 0;

  void validate() const;
  static ChainConfig from_json(const Json& j);
  Json to_json() const;
};

// One reverse edit, in the order it was applied while dismantling.
struct ReverseEdit {
  int turn = 0;          // reverse turn index
  double progress = 0.0;
  EditOp op = EditOp::Add;
  bool final_clear = false;  // produced by the last-turn clear-out
  std::string uid;
  double volume = 0.0;
  bool bucket_nonempty = false;  // add only: the progress bucket had candidates
};

struct ReverseTurn {
  Scene scene_before;  // S_cur
  Scene scene_after;   // S'
  std::vector<ToolCall> forward_calls;  // already in forward execution order
};

struct ReverseChain {
  int planned_turns = 0;
  std::vector<ReverseTurn> turns;
  std::vector<ReverseEdit> edits;
};

struct EditTurn {
  Scene scene_before;
  std::vector<ToolCall> forward_calls;
  Scene scene_after;
  std::string cot_stub;

  friend bool operator==(const EditTurn&, const EditTurn&) = default;
};

struct EditChain {
  std::string scene_id;
  std::string instruction;
  std::vector<EditTurn> turns;
  Scene final_scene;

  friend bool operator==(const EditChain&, const EditChain&) = default;
};

struct AddCandidates {
  std::vector<std::size_t> indices;
  bool fallback = false;  // the bucket for this progress was empty
};

// Objects a reverse add may pick at the given progress: those in the volume
// bucket for that progress, or all of them when the bucket is empty.
AddCandidates add_candidates(std::span<const double> volumes, double progress, const ChainConfig& cfg);

// Throws EmptyScene when the scene has no objects.
ReverseChain dismantle(const Scene& final_scene, const ChainConfig& cfg, Rng& rng, const AssetCatalog& catalog);

// Forward chain; intermediate scenes are produced by the transition function.
EditChain invert(const ReverseChain& reverse, const Scene& final_scene, std::string scene_id, std::string instruction,
                 const AssetCatalog& catalog);

// Throws ReplayFailure if any call is rejected.
Scene replay(const EditChain& chain, const AssetCatalog& catalog);

// Re-instantiates every object through the transition function, which fixes
// the object order (by uid) and the instantiated sizes.
Scene normalize_scene(const Scene& scene, const AssetCatalog& catalog);

std::string make_instruction(const Scene& scene, const AssetCatalog& catalog);

struct ChainScore {
  int coherence = 0;              // 0-40
  int naturalness = 0;            // 0-35
  int instruction_following = 0;  // 0-15
  int visual_transition = 0;      // 0-10
  int overall = 0;
  std::string reasoning;
  std::string strengths;
  std::string weaknesses;

  friend bool operator==(const ChainScore&, const ChainScore&) = default;
};

Json chain_score_to_json(const ChainScore& s);
// Validates ranges and overall == sum; throws NonConformingResponse.
ChainScore chain_score_from_json(const Json& j);

class ChainJudge {
 public:
  virtual ~ChainJudge() = default;
  virtual ChainScore score(const EditChain& chain) = 0;
};

class MockChainJudge : public ChainJudge {
 public:
  explicit MockChainJudge(const AssetCatalog& catalog, PhysicsConfig physics = {})
      : catalog_(catalog), physics_(physics) {}
  ChainScore score(const EditChain& chain) override;

 private:
  const AssetCatalog& catalog_;
  PhysicsConfig physics_;
};

ChainScore score_chain(const EditChain& chain, ChainJudge& judge);

struct NamedScene {
  std::string id;
  Scene scene;
};

struct ScoredChain {
  int candidate = 0;
  std::uint64_t seed = 0;
  EditChain chain;
  ChainScore score;
};

struct SceneChains {
  std::string scene_id;
  std::vector<ScoredChain> kept;  // best first
};

struct SynthOptions {
  int n_candidates = 10;
  int keep = 3;
  std::size_t jobs = 1;
};

using ChainJudgeFactory = std::function<std::unique_ptr<ChainJudge>()>;

// Per scene: normalize, generate candidates with derived seeds, verify replay,
// score, keep the top `keep`. Scenes with violations are rejected.
std::vector<SceneChains> synthesize_dataset(const std::vector<NamedScene>& scenes, const ChainConfig& cfg,
                                            const SynthOptions& opts, const ChainJudgeFactory& judge_factory,
                                            const AssetCatalog& catalog);

// One chain for one scene with an explicit seed.
EditChain synthesize_chain(const Scene& normalized, const std::string& scene_id, std::uint64_t seed,
                           const ChainConfig& cfg, const AssetCatalog& catalog, ReverseChain* reverse_out = nullptr);

}  // namespace scenechain
