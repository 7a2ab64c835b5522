#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "builders.hpp"
#include "criteria.hpp"
#include "scenechain/canonical_json.hpp"
#include "scenechain/chain_io.hpp"
#include "scenechain/chain_synth.hpp"
#include "scenechain/env.hpp"
#include "scenechain/episode_io.hpp"
#include "scenechain/fixtures.hpp"
#include "scenechain/judge.hpp"
#include "scenechain/phys_opt.hpp"

using namespace scenechain;
namespace fs = std::filesystem;

namespace acceptance {

namespace {

const AssetCatalog& catalog() {
  static const AssetCatalog c = AssetCatalog::builtin();
  return c;
}

std::string printf_string(const char* pattern, auto... args) {
  char buf[400];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Checks the volume-bucket rule for the object-removing reverse edits of one
// chain, rebuilding each turn's candidate pool from the turn's starting scene.
std::string bucket_violation(const ReverseChain& rev, const ChainConfig& cfg, std::size_t& checked) {
  for (std::size_t t = 0; t < rev.turns.size(); ++t) {
    std::map<std::string, double> available;
    for (const auto& o : rev.turns[t].scene_before.objects) available[o.uid] = o.size.x * o.size.y * o.size.z;
    for (const auto& e : rev.edits) {
      if (e.turn != static_cast<int>(t) || e.final_clear || e.op == EditOp::Remove) continue;
      const auto it = available.find(e.uid);
      if (it == available.end()) return "edit on an object outside the turn's pool: " + e.uid;
      if (e.op == EditOp::Add) {
        auto in_bucket = [&](double v) {
          if (e.progress < cfg.early_p) return v < cfg.small_vol;
          if (e.progress < cfg.late_p) return v >= cfg.small_vol && v < cfg.large_vol;
          return v >= cfg.large_vol;
        };
        const bool nonempty = std::any_of(available.begin(), available.end(), [&](const auto& kv) { return in_bucket(kv.second); });
        if (nonempty) {
          ++checked;
          if (!in_bucket(it->second)) {
            return printf_string("turn %zu progress %.3f picked %s (%.4f m3) outside its bucket", t, e.progress, e.uid.c_str(),
                                 it->second);
          }
        }
      }
      available.erase(it);
    }
  }
  return "";
}

}  // namespace

Outcome chain_replay(const fs::path& out_dir) {
  const std::vector<NamedScene> fixtures = make_fixture_set(kChainScenes, 2025, catalog());
  ChainConfig cfg;
  cfg.seed = 17;
  SynthOptions opts;
  opts.n_candidates = kChainsPerScene;
  opts.keep = kChainsPerScene;
  opts.jobs = 1;
  const auto dataset = synthesize_dataset(
      fixtures, cfg, opts, [] { return std::make_unique<MockChainJudge>(catalog()); }, catalog());
  write_dataset(out_dir / "chains", dataset);

  std::size_t chains = 0, bucket_checks = 0, non_final = 0;
  std::size_t min_turns = 100, max_turns = 0, short_chains = 0;
  std::array<std::size_t, 6> op_counts{};
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const Scene normalized = normalize_scene(fixtures[s].scene, catalog());
    for (const ScoredChain& sc : dataset[s].kept) {
      ++chains;
      const EditChain& chain = sc.chain;
      if (!(chain.final_scene == normalized)) return {false, "chain target differs from its source scene: " + chain.scene_id};
      if (!(replay(chain, catalog()) == normalized)) return {false, "replay differs from the source scene: " + chain.scene_id};
      min_turns = std::min(min_turns, chain.turns.size());
      max_turns = std::max(max_turns, chain.turns.size());
      short_chains += chain.turns.size() < 4;

      ReverseChain rev;
      const EditChain again = synthesize_chain(normalized, dataset[s].scene_id, sc.seed, cfg, catalog(), &rev);
      if (!(again == chain)) return {false, "chain is not reproducible from its seed"};
      for (const auto& e : rev.edits) {
        if (e.final_clear) continue;
        ++non_final;
        ++op_counts[static_cast<std::size_t>(std::find(kEditOps.begin(), kEditOps.end(), e.op) - kEditOps.begin())];
      }
      const std::string why = bucket_violation(rev, cfg, bucket_checks);
      if (!why.empty()) return {false, why};
    }
  }
  if (chains != static_cast<std::size_t>(kChainScenes * kChainsPerScene)) return {false, printf_string("%zu chains", chains)};

  std::string freq;
  double worst = 0.0;
  for (std::size_t k = 0; k < kEditOps.size(); ++k) {
    const double f = static_cast<double>(op_counts[k]) / static_cast<double>(non_final);
    worst = std::max(worst, std::fabs(f - cfg.op_probs[k]));
    freq += printf_string("%s%s %.3f", k ? ", " : "", std::string(edit_op_name(kEditOps[k])).c_str(), f);
  }
  const bool turns_ok = min_turns >= 4 && max_turns <= 8;
  const std::string detail = printf_string(
      "%zu chains replay exactly; turns %zu..%zu (%zu below 4); ops over %zu edits: %s (max dev %.4f); %zu bucket checks", chains,
      min_turns, max_turns, short_chains, non_final, freq.c_str(), worst, bucket_checks);
  return {turns_ok && worst <= kOpFrequencyTolerance && bucket_checks > 0, detail};
}

Outcome optimizer_guarantees(const fs::path& out_dir) {
  {
    Scene s = testing_support::rect_scene(2, 2);
    s.objects = {testing_support::cube("a", 3, 3, 0.2)};
    OptConfig one;
    one.max_steps = 1;
    Rng rng(0);
    const OptReport rep = optimize(s, one, rng).report;
    if (rep.moved.size() != 1 || std::fabs(rep.moved[0].to.x - 2.8586) > kOobStepTolerance ||
        std::fabs(rep.moved[0].to.z - 2.8586) > kOobStepTolerance) {
      return {false, "out-of-bounds step from (3, 3) does not reach (2.8586, 2.8586)"};
    }
  }

  fs::create_directories(out_dir / "optimizer");
  const auto rooms = fixture_room_types(catalog());
  std::size_t targets = 0, deletions = 0, improved = 0;
  int max_steps_seen = 0;
  for (int i = 0; i < kPerturbedScenes; ++i) {
    const auto seed = static_cast<std::uint64_t>(i);
    const Scene clean = make_fixture_scene(rooms[seed % rooms.size()], seed / 4, catalog());
    Rng jitter(derive_seed(99, "jitter", seed));
    const Scene s = jitter_scene(clean, jitter, 4, 1.0);
    OptConfig cfg;
    Rng rng(derive_seed(99, "phys_opt", seed));
    const OptResult r = optimize(s, cfg, rng);
    const OptReport& rep = r.report;
    if (rep.steps_run > 5 || rep.steps_run > cfg.max_steps) return {false, printf_string("case %d ran %d iterations", i, rep.steps_run)};
    max_steps_seen = std::max(max_steps_seen, rep.steps_run);
    for (std::size_t k = 1; k < rep.violations_at_head.size(); ++k) {
      if (rep.violations_at_head[k] > rep.violations_at_head[k - 1]) {
        return {false, printf_string("case %d: violations rise from %zu to %zu", i, rep.violations_at_head[k - 1],
                                     rep.violations_at_head[k])};
      }
    }
    improved += rep.residual.violation_count() < check_physics(s).violation_count();
    std::map<std::string, double> volume;
    for (const auto& o : s.objects) volume[o.uid] = o.size.x * o.size.y * o.size.z;
    for (const auto& t : rep.targets) {
      ++targets;
      const std::string& other = t.target == t.pair.first ? t.pair.second : t.pair.first;
      if (volume.at(t.target) > volume.at(other)) {
        return {false, printf_string("case %d: perturbed %s over smaller %s", i, t.target.c_str(), other.c_str())};
      }
    }
    deletions += rep.deleted.size();
    const std::string name = printf_string("case_%03d", i);
    write_text_file_atomic(out_dir / "optimizer" / (name + ".scene.json"), serialize_scene(r.scene));
    write_text_file_atomic(out_dir / "optimizer" / (name + ".report.json"),
                           write_json(opt_report_to_json(rep), FloatFormat::RoundTrip) + "\n");
  }
  return {true, printf_string("(3,3) -> 2.8586; %d scenes non-increasing within %d iterations; %zu targets all the smaller box; "
                              "%zu improved, %zu deletions",
                              kPerturbedScenes, max_steps_seen, targets, improved, deletions)};
}

Outcome end_to_end_episodes(const fs::path& out_dir) {
  const std::array<const char*, 4> rooms{"bedroom", "living room", "dining room", "office"};
  const std::array<const char*, 5> styles{"Design a cozy %s", "I need a modern %s for a small apartment",
                                          "Furnish a bright %s with plenty of storage", "Create a minimalist %s",
                                          "Set up a family %s with warm lighting"};
  int max_edit_turns = 0;
  double min_j = 1.0;
  for (int i = 0; i < kEpisodePrompts; ++i) {
    const std::string prompt = printf_string(styles[static_cast<std::size_t>(i) % styles.size()], rooms[static_cast<std::size_t>(i) / 5]);
    GreedyBuilderPolicy policy(catalog());
    MockJudge judge(catalog());
    EpisodeConfig cfg;
    const EpisodeRecord rec = run_episode(policy, judge, prompt, std::nullopt, cfg, static_cast<std::uint64_t>(i), catalog());

    int edit_turns = 0;
    for (const auto& t : rec.turns) edit_turns += t.phase == ObsPhase::Edit;
    max_edit_turns = std::max(max_edit_turns, edit_turns);
    if (edit_turns > 15) return {false, printf_string("'%s' used %d edit turns", prompt.c_str(), edit_turns)};
    if (rec.cause != TerminationCause::TerminateTool) return {false, "'" + prompt + "' did not terminate itself"};

    std::multiset<std::string> have;
    for (const auto& o : rec.final_scene.objects) have.insert(catalog().category_of(o.description));
    const std::multiset<std::string> wanted(rec.mandatory.items.begin(), rec.mandatory.items.end());
    if (wanted.empty()) return {false, "'" + prompt + "' has no mandatory list"};
    for (const auto& c : wanted) {
      if (have.count(c) < wanted.count(c)) return {false, "'" + prompt + "' lacks " + c};
    }
    const ViolationReport residual = check_physics(rec.final_scene, cfg.physics);
    if (!residual.clean()) return {false, printf_string("'%s' keeps %zu violations", prompt.c_str(), residual.violation_count())};
    if (!(rec.score.j_tau > 0.0)) return {false, printf_string("'%s' scores J = %.6f", prompt.c_str(), rec.score.j_tau)};
    min_j = std::min(min_j, rec.score.j_tau);

    const fs::path dir = out_dir / "episodes" / printf_string("episode_%02d", i);
    write_episode(dir, rec);
    const EpisodeRecord back = read_episode(dir);
    const RescoreResult again = rescore_episode(back, catalog());
    if (!again.matches || again.score.j_tau != rec.score.j_tau || again.final_reward.R_final != rec.final_reward.R_final) {
      return {false, "'" + prompt + "' does not rescore bit-exactly"};
    }
  }
  return {true, printf_string("%d episodes: at most %d edit turns, mandatory objects present, no residual violations, "
                              "min J %.4f, all records rescore exactly",
                              kEpisodePrompts, max_edit_turns, min_j)};
}

}  // namespace acceptance
