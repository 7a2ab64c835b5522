#pragma once

#include <filesystem>
#include <string>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Tolerances and budgets are fixed here so every run is judged the same way.
inline constexpr double kCurveTolerance = 1e-12;
inline constexpr int kCurveSamples = 10000;
inline constexpr int kRewardFuzzCases = 100000;
inline constexpr int kObbPairs = 500;
inline constexpr std::size_t kMcSamples = 1000000;
inline constexpr double kBoundaryBand = 0.01;
inline constexpr int kOobCases = 100;
inline constexpr double kOobVolumeTolerance = 1e-3;
inline constexpr int kChainScenes = 50;
inline constexpr int kChainsPerScene = 20;
inline constexpr double kOpFrequencyTolerance = 0.02;
inline constexpr int kPerturbedScenes = 200;
inline constexpr double kOobStepTolerance = 1e-4;
inline constexpr int kEpisodePrompts = 20;

inline constexpr double kBudget1 = 1.0;
inline constexpr double kBudget2 = 10.0;
inline constexpr double kBudget4 = 60.0;
inline constexpr double kBudget5 = 120.0;
inline constexpr double kBudget6 = 30.0;
inline constexpr double kBudget8 = 120.0;

Outcome piecewise_golden_table();
Outcome weight_sums_and_ranges();
Outcome trajectory_arithmetic();
Outcome geometry_oracles();
Outcome chain_replay(const std::filesystem::path& out_dir);
Outcome optimizer_guarantees(const std::filesystem::path& out_dir);
Outcome dataset_ratios();
Outcome end_to_end_episodes(const std::filesystem::path& out_dir);

}  // namespace acceptance
