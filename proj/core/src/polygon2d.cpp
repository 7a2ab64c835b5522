#include "scenechain/polygon2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenechain {

double norm(Vec2 v) { return std::hypot(v.x, v.z); }

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    acc += a.x * b.z - b.x * a.z;
  }
  return 0.5 * acc;
}

double polygon_area(std::span<const Vec2> poly) { return std::fabs(signed_area(poly)); }

Vec2 polygon_centroid(std::span<const Vec2> poly) {
  const double a = signed_area(poly);
  const std::size_t n = poly.size();
  if (n == 0) return {};
  if (std::fabs(a) < 1e-15) {
    Vec2 mean{};
    for (const auto& p : poly) mean = mean + p;
    return mean * (1.0 / static_cast<double>(n));
  }
  double cx = 0.0;
  double cz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double c = p.x * q.z - q.x * p.z;
    cx += (p.x + q.x) * c;
    cz += (p.z + q.z) * c;
  }
  return {cx / (6.0 * a), cz / (6.0 * a)};
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({std::fabs(b.x - a.x), std::fabs(b.z - a.z), std::fabs(c.x - a.x),
                                 std::fabs(c.z - a.z), 1.0});
  if (std::fabs(v) <= 1e-12 * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.z, b.z) - 1e-12 <= p.z && p.z <= std::max(a.z, b.z) + 1e-12;
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool is_simple_polygon(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (poly[i] == poly[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Vec2 c = poly[j];
      const Vec2 d = poly[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one vertex; they must not fold back onto each other.
        const Vec2 shared = (j == i + 1) ? b : a;
        const Vec2 other_i = (j == i + 1) ? a : b;
        const Vec2 other_j = (j == i + 1) ? d : c;
        if (orientation(other_i, shared, other_j) == 0 &&
            dot(other_i - shared, other_j - shared) > 0.0) {
          return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return polygon_area(poly) > 1e-12;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

double distance_to_boundary(Vec2 p, std::span<const Vec2> poly) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  if (distance_to_boundary(p, poly) <= 1e-12) return true;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.z > p.z) != (b.z > p.z)) {
      const double x_at = a.x + (p.z - a.z) * (b.x - a.x) / (b.z - a.z);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

Polygon2 counter_clockwise(std::span<const Vec2> poly) {
  Polygon2 out(poly.begin(), poly.end());
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

Polygon2 clip_to_convex(std::span<const Vec2> subject, std::span<const Vec2> convex_clip) {
  const Polygon2 clip = counter_clockwise(convex_clip);
  Polygon2 output(subject.begin(), subject.end());
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Vec2 a = clip[e];
    const Vec2 b = clip[(e + 1) % m];
    const Vec2 edge = b - a;
    auto side = [&](Vec2 p) { return cross(edge, p - a); };
    Polygon2 input;
    input.swap(output);
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 cur = input[i];
      const Vec2 prev = input[(i + n - 1) % n];
      const double s_cur = side(cur);
      const double s_prev = side(prev);
      const bool cur_in = s_cur >= 0.0;
      const bool prev_in = s_prev >= 0.0;
      if (cur_in) {
        if (!prev_in) {
          const double t = s_prev / (s_prev - s_cur);
          output.push_back(prev + (cur - prev) * t);
        }
        output.push_back(cur);
      } else if (prev_in) {
        const double t = s_prev / (s_prev - s_cur);
        output.push_back(prev + (cur - prev) * t);
      }
    }
  }
  return output;
}

double intersection_area_with_convex(std::span<const Vec2> subject, std::span<const Vec2> convex) {
  const Polygon2 clipped = clip_to_convex(subject, convex);
  return std::fabs(signed_area(clipped));
}

}  // namespace scenechain
