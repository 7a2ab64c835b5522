#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace scenechain {

// Seedable generator used everywhere randomness is needed. The engine is
// std::mt19937_64 (fully specified by the standard); the distributions below
// are implemented here rather than taken from <random> so that sampled values
// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [lo, hi] (inclusive), rejection-sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Index drawn proportionally to the non-negative weights.
  std::size_t weighted_index(std::span<const double> weights);

  // Fisher-Yates on top of uniform_int.
  template <typename Vec>
  void shuffle(Vec& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

// Sub-seed for candidate k of a scene: hash(base_seed, scene_id, k).
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view scene_id, std::uint64_t k);

}  // namespace scenechain
