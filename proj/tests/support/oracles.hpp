#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scenechain/geometry.hpp"
#include "scenechain/polygon2d.hpp"

// Brute-force reference implementations used to check the geometry kernel.
// Nothing here calls into geometry.cpp or polygon2d.cpp.
namespace oracle {

using scenechain::Obb;
using scenechain::Polygon2;
using scenechain::Vec2;
using scenechain::Vec3;

// World point of local coordinates (lx, ly, lz) of a yaw-rotated box.
Vec3 box_point(const Obb& box, double lx, double ly, double lz);
bool box_contains(const Obb& box, const Vec3& p);

struct McResult {
  std::size_t samples = 0;
  std::size_t hits = 0;  // samples of `a` that lie inside `b`
  double overlap_volume = 0.0;
};

// Uniform samples inside `a`, counted when also inside `b`.
McResult mc_containment(const Obb& a, const Obb& b, std::size_t samples, std::uint64_t seed);

// Minimum over sampled directions of the projection overlap of the two boxes.
// Positive: approximate penetration depth. Negative: approximate separation.
double sampled_signed_depth(const Obb& a, const Obb& b, int horizontal_steps = 7200, int random_dirs = 2000);

// Even-odd test with half-open edge rule.
bool in_polygon(const Vec2& p, const Polygon2& poly);

// Area by 1D scanlines: columns at most `step` wide, split at vertex
// abscissae, each weighted by the z extent at its center from edge crossings.
double scanline_area(const Polygon2& poly, double step = 0.01);

// Area of `object` (convex) lying outside `room`, by the same scanlines.
double scanline_outside_area(const Polygon2& object, const Polygon2& room, double step = 0.01);

// Plain point grid: counts cell centers inside the polygon.
double grid_area(const Polygon2& poly, double step = 0.01);

// Footprint corners of a box, computed from its yaw directly.
Polygon2 box_footprint(const Obb& box);

}  // namespace oracle
