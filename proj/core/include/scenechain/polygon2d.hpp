#pragma once

#include <span>
#include <vector>

namespace scenechain {

// Floor-plane point: x and z of the world frame.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  Vec2 operator+(Vec2 o) const { return {x + o.x, z + o.z}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, z - o.z}; }
  Vec2 operator*(double s) const { return {x * s, z * s}; }
};

using Polygon2 = std::vector<Vec2>;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.z - a.z * b.x; }
double norm(Vec2 v);

double signed_area(std::span<const Vec2> poly);
double polygon_area(std::span<const Vec2> poly);
Vec2 polygon_centroid(std::span<const Vec2> poly);

// Closed segments, touching counts as intersecting.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
bool is_simple_polygon(std::span<const Vec2> poly);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double distance_to_boundary(Vec2 p, std::span<const Vec2> poly);
// Boundary points count as inside.
bool point_in_polygon(Vec2 p, std::span<const Vec2> poly);

Polygon2 counter_clockwise(std::span<const Vec2> poly);

// Sutherland-Hodgman clip of an arbitrary simple polygon against a convex one.
// The result may contain degenerate sliver edges when the subject is
// non-convex, but its signed area is exact.
Polygon2 clip_to_convex(std::span<const Vec2> subject, std::span<const Vec2> convex_clip);

double intersection_area_with_convex(std::span<const Vec2> subject, std::span<const Vec2> convex);

}  // namespace scenechain
