#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scenechain/scene.hpp"

namespace scenechain {

struct RenderOptions {
  double px_per_meter = 80.0;
  double grid_step = 1.0;  // m
  bool label_boxes = true;
  bool merged = false;
};

using Rgb = std::array<std::uint8_t, 3>;

// Stable color for a uid.
Rgb uid_color(std::string_view uid);

// Maps floor coordinates to top-down image coordinates (x right, z down).
struct TopdownFrame {
  double min_x = 0.0;
  double min_z = 0.0;
  double scale = 1.0;   // px per meter
  double margin = 40.0; // px
  double width = 0.0;
  double height = 0.0;

  Vec2 to_screen(Vec2 p) const { return {margin + (p.x - min_x) * scale, margin + (p.z - min_z) * scale}; }
};

TopdownFrame topdown_frame(const RoomGeometry& room, double px_per_meter);

std::string render_topdown(const Scene& scene, const RenderOptions& opts = {});

enum class DrawKind { Polygon, Line, Text };

struct DrawItem {
  DrawKind kind = DrawKind::Polygon;
  std::vector<Vec2> points;  // pixel coordinates
  Rgb fill{0, 0, 0};
  bool filled = true;
  Rgb stroke{0, 0, 0};
  bool stroked = false;
  std::string text;
  std::string owner;  // uid of the object drawn, empty for room and grid
};

inline constexpr int kPanelSize = 512;

// Drawing lists for the two panels of the merged view, in paint order.
std::vector<DrawItem> topdown_display_list(const Scene& scene, const RenderOptions& opts, int size = kPanelSize);
std::vector<DrawItem> isometric_display_list(const Scene& scene, const RenderOptions& opts, int size = kPanelSize);

// PNG bytes: the top-down panel, or top-down | isometric when opts.merged.
std::vector<std::uint8_t> render_png(const Scene& scene, const RenderOptions& opts = {});
std::vector<std::uint8_t> render_merged(const Scene& scene, RenderOptions opts = {});

}  // namespace scenechain
