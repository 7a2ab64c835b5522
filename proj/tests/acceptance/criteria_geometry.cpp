#include <cmath>
#include <cstdio>
#include <numbers>

#include "builders.hpp"
#include "criteria.hpp"
#include "oracles.hpp"
#include "scenechain/geometry.hpp"
#include "scenechain/rng.hpp"

using namespace scenechain;

namespace acceptance {

namespace {

Obb random_box(Rng& rng, double cx, double cz, double base) {
  Obb b;
  b.half_extents = {rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)};
  b.center = {cx, base + b.half_extents.y, cz};
  b.yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
  return b;
}

RoomGeometry random_room(Rng& rng, int i) {
  const double h = rng.uniform(2.2, 3.2);
  switch (i % 3) {
    case 0: return make_rect_room(rng.uniform(2.0, 6.0), rng.uniform(2.0, 6.0), h, "bedroom", "r");
    case 1: return make_polygon_room(testing_support::l_footprint(), h, "bedroom", "l");
    default: {
      const double w = rng.uniform(3.0, 6.0), d = rng.uniform(3.0, 6.0);
      const double cw = rng.uniform(0.8, w - 1.0), cd = rng.uniform(0.8, d - 1.0);
      return make_polygon_room({{0, 0}, {w, 0}, {w, d - cd}, {w - cw, d - cd}, {w - cw, d}, {0, d}}, h, "bedroom", "l2");
    }
  }
}

}  // namespace

Outcome geometry_oracles() {
  const PhysicsConfig cfg;
  Rng rng(4242);
  int compared = 0, excluded = 0, colliding = 0;
  for (int i = 0; i < kObbPairs; ++i) {
    const Obb a = random_box(rng, 0.0, 0.0, 0.0);
    const double reach = 1.2 * (a.half_extents.x + a.half_extents.z + 1.0);
    const double base = rng.uniform01() < 0.2 ? rng.uniform(0.0, 2.0 * a.half_extents.y + 0.1) : 0.0;
    const Obb b = random_box(rng, rng.uniform(-reach, reach), rng.uniform(-reach, reach), base);
    const double signed_depth = oracle::sampled_signed_depth(a, b);
    if (std::fabs(signed_depth - cfg.eps_col) <= kBoundaryBand) {
      ++excluded;
      continue;
    }
    ++compared;
    const bool sat = penetration(a, b).depth > cfg.eps_col;
    const oracle::McResult mc = oracle::mc_containment(a, b, kMcSamples, 1000 + static_cast<std::uint64_t>(i));
    char buf[200];
    if (signed_depth < 0.0 && (mc.hits != 0 || sat)) {
      std::snprintf(buf, sizeof buf, "pair %d separated by %.4f but SAT=%d, MC hits=%zu", i, -signed_depth, sat, mc.hits);
      return {false, buf};
    }
    if (signed_depth > cfg.eps_col + kBoundaryBand && (mc.hits == 0 || !sat)) {
      std::snprintf(buf, sizeof buf, "pair %d overlaps by %.4f but SAT=%d, MC hits=%zu", i, signed_depth, sat, mc.hits);
      return {false, buf};
    }
    colliding += sat;
  }
  if (colliding == 0 || colliding == compared) return {false, "pair generator is degenerate"};

  double worst = 0.0;
  int nonzero = 0;
  for (int i = 0; i < kOobCases; ++i) {
    const RoomGeometry room = random_room(rng, i);
    const Polygon2 fp = room.footprint();
    double lo_x = fp[0].x, hi_x = fp[0].x, lo_z = fp[0].z, hi_z = fp[0].z;
    for (const auto& p : fp) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_z = std::min(lo_z, p.z);
      hi_z = std::max(hi_z, p.z);
    }
    const Vec3 size{rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)};
    const double y = rng.uniform01() < 0.25 ? rng.uniform(0.5 * size.y, room.ceiling_height() + 0.5) : 0.5 * size.y;
    const SceneObject o = testing_support::box("o", "box", {rng.uniform(lo_x - 0.5, hi_x + 0.5), y, rng.uniform(lo_z - 0.5, hi_z + 0.5)},
                                               size, rng.uniform(-std::numbers::pi, std::numbers::pi));
    const double height = std::max(0.0, std::min(room.ceiling_height(), o.top()) - std::max(0.0, o.bottom()));
    const double expected = oracle::scanline_outside_area(oracle::box_footprint(obb_from_object(o)), fp, 0.01) * height;
    const double got = oob_excess(o, room).oob_volume;
    worst = std::max(worst, std::fabs(expected - got));
    nonzero += expected > 1e-6;
    if (std::fabs(expected - got) > kOobVolumeTolerance) {
      char buf[400];
      std::snprintf(buf, sizeof buf, "OOB case %d: kernel %.6f vs grid %.6f (room %zu vertices, box at %.4f %.4f %.4f size %.4f %.4f %.4f yaw %.6f)",
                    i, got, expected, fp.size(), o.position.x, o.position.y, o.position.z, o.size.x, o.size.y, o.size.z, o.yaw());
      return {false, buf};
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d pairs agree (%d colliding, %d in boundary band); OOB worst error %.2e m3 over %d cases (%d non-zero)",
                compared, colliding, excluded, worst, kOobCases, nonzero);
  return {true, buf};
}

}  // namespace acceptance
