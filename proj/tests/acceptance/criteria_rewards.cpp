#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "builders.hpp"
#include "criteria.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/rewards.hpp"
#include "scenechain/rng.hpp"

using namespace scenechain;

namespace acceptance {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

Outcome piecewise_golden_table() {
  struct Golden {
    const char* name;
    std::function<double(double)> f;
    double x;
    double y;
  };
  const std::vector<Golden> golden{
      {"R_col", collision_rate_reward, 0.0, 1.0},   {"R_col", collision_rate_reward, 20.0, 0.5},
      {"R_col", collision_rate_reward, 45.0, 0.0},  {"R_oob", oob_rate_reward, 0.0, 1.0},
      {"R_oob", oob_rate_reward, 10.0, 0.5},        {"R_oob", oob_rate_reward, 30.0, 0.0},
      {"R_pen", penetration_reward, 0.0, 1.0},      {"R_pen", penetration_reward, 0.1, 0.5},
      {"R_pen", penetration_reward, 0.3, 0.0},      {"R_oob_vol", oob_volume_reward, 0.0, 1.0},
      {"R_oob_vol", oob_volume_reward, 0.2, 0.5},   {"R_support", support_reward, 0.0, 1.0},
  };
  for (const auto& g : golden) {
    const double y = g.f(g.x);
    if (std::fabs(y - g.y) > kCurveTolerance) {
      return {false, std::string(g.name) + fmt("(%g) = %.17g", g.x, y)};
    }
  }

  struct Curve {
    const char* name;
    std::function<double(double)> f;
    double hi;
    std::vector<double> breaks;
  };
  const std::vector<Curve> curves{
      {"R_col", collision_rate_reward, 100.0, {20, 45}},
      {"R_oob", oob_rate_reward, 100.0, {10, 30}},
      {"R_pen", penetration_reward, 2.0, {0.1, 0.3, 0.6, 1.0}},
      {"R_oob_vol", oob_volume_reward, 3.0, {0.2, 0.5, 1.0, 2.0}},
      {"R_support", support_reward, 100.0, {20}},
  };
  Rng rng(20240601);
  for (const auto& c : curves) {
    for (const double b : c.breaks) {
      if (std::fabs(c.f(b - 1e-9) - c.f(b + 1e-9)) > 1e-7) return {false, std::string(c.name) + fmt(" jumps at %g", b)};
    }
    std::vector<double> xs(kCurveSamples);
    for (double& x : xs) x = rng.uniform(0.0, c.hi);
    std::sort(xs.begin(), xs.end());
    double prev = c.f(0.0);
    for (const double x : xs) {
      const double y = c.f(x);
      if (y > prev || y < -1.0 || y > 1.0) return {false, std::string(c.name) + fmt(" misbehaves at %g", x)};
      prev = y;
    }
  }
  return {true, "12 golden values exact, 5 curves x 10000 samples continuous and non-increasing"};
}

Outcome weight_sums_and_ranges() {
  const RewardWeights w;
  const double step = w.step_fmt + 4 * w.step_phy_each() + 2 * w.step_sem_each();
  const double terminal = w.final_fmt + w.final_obj + w.final_scene_phys + w.final_scene_vlm;
  if (w.step_fmt != 0.10 || w.step_phy_each() != 0.10 || w.step_sem_each() != 0.25) return {false, "step weights differ"};
  if (std::fabs(step - 1.0) > 1e-15 || std::fabs(terminal - 1.0) > 1e-15) {
    return {false, fmt("step sum %.17g, terminal sum %.17g", step, terminal)};
  }

  Rng rng(77);
  const std::vector<double> consolidated{-1.0, -0.5, 0.0, 0.5, 1.0};
  auto pick = [&](const std::vector<double>& v) { return v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1))]; };
  auto ratios = [&] {
    SceneRatios r;
    r.r_col = rng.uniform(0, 100);
    r.r_oob = rng.uniform(0, 100);
    r.d_pen = rng.uniform(0, 5);
    r.v_oob = rng.uniform(0, 5);
    r.r_unsup = rng.uniform(0, 100);
    return r;
  };
  for (int i = 0; i < kRewardFuzzCases; ++i) {
    const double r_fmt = pick({1.0, 0.9, 0.8, 0.2, 0.1, 0.0, -0.5, -1.0});
    const StepReward s = step_reward(r_fmt, ratios(), pick({-1.0, 0.0, 1.0}), rng.uniform(-1, 1));
    if (!(s.r_t >= -1.0 && s.r_t <= 1.0)) return {false, fmt("r_t = %.17g in case %g", s.r_t, i)};

    FinalRewardInputs in;
    in.object_count = static_cast<std::size_t>(rng.uniform_int(0, 30));
    in.valid_object_count = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(in.object_count)));
    in.r_fmt = r_fmt;
    in.r_key = rng.uniform(-1, 1);
    in.r_size = rng.uniform(-1, 1);
    in.ratios = ratios();
    in.consolidated = {pick(consolidated), pick(consolidated), pick(consolidated)};
    const FinalReward f = final_reward(in);
    if (!(f.R_final >= -1.0 && f.R_final <= 1.0)) return {false, fmt("R_final = %.17g in case %g", f.R_final, i)};

    std::vector<double> steps(static_cast<std::size_t>(rng.uniform_int(1, 16)));
    for (double& x : steps) x = rng.uniform(-1, 1);
    const double j = trajectory_score(steps, f.R_final).j_tau;
    if (!(j >= -1.0 && j <= 1.0)) return {false, fmt("J = %.17g in case %g", j, i)};
  }
  return {true, "step and terminal weights sum to 1; 100000 fuzz cases in [-1, 1]"};
}

Outcome trajectory_arithmetic() {
  const TrajectoryScore t = trajectory_score({0.25, 0.75}, 1.0);
  if (t.mean_step != 0.5 || t.j_tau != 0.8) return {false, fmt("mean %.17g, J %.17g", t.mean_step, t.j_tau)};
  for (std::size_t n = 0; n < 4; ++n) {
    FinalRewardInputs in;
    in.object_count = n;
    in.valid_object_count = n;
    in.r_fmt = 1.0;
    in.r_key = 1.0;
    in.r_size = 1.0;
    in.consolidated = {1.0, 1.0, 1.0};
    const FinalReward f = final_reward(in);
    if (f.R_final != -1.0 || !f.forced_failure) return {false, fmt("%g objects give R_final %.17g", static_cast<double>(n), f.R_final)};
  }
  return {true, "J = 0.8 exactly; 0 to 3 objects give R_final = -1 exactly"};
}

Outcome dataset_ratios() {
  using testing_support::cube;
  Scene one = testing_support::rect_scene(6, 6);
  one.objects = {cube("a", 6.0, 3), cube("b", 1, 1), cube("c", 3, 3), cube("d", 1, 5)};
  Scene two = testing_support::rect_scene(6, 6);
  two.objects = {cube("a", 1, 1), cube("b", 3, 3)};
  const DatasetMetrics m = aggregate({{check_physics(one), one}, {check_physics(two), two}});
  const bool ok = m.per_scene.size() == 2 && m.per_scene[0].oob_fraction == 0.25 && m.per_scene[1].oob_fraction == 0.0 &&
                  m.obr == 0.125 && m.cnr == 0.0;
  return {ok, fmt("OBR %.17g, CNR %.17g", m.obr, m.cnr)};
}

}  // namespace acceptance
