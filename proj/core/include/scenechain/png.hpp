#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scenechain/render.hpp"

namespace scenechain {

class Canvas {
 public:
  Canvas(int width, int height, Rgb background);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb pixel(int x, int y) const;

  // Even-odd fill sampled at pixel centers; offset_x shifts the whole shape.
  void fill_polygon(const std::vector<Vec2>& pts, Rgb color, double offset_x = 0.0);
  void draw_line(Vec2 a, Vec2 b, Rgb color, double offset_x = 0.0);
  void draw_polyline(const std::vector<Vec2>& pts, Rgb color, bool closed, double offset_x = 0.0);
  // 5x7 bitmap font; unsupported characters draw as blanks.
  void draw_text(Vec2 at, std::string_view text, Rgb color, double offset_x = 0.0);

  void draw(const std::vector<DrawItem>& items, double offset_x = 0.0);

  std::vector<std::uint8_t> encode_png() const;

 private:
  void put(int x, int y, Rgb c);

  int width_;
  int height_;
  std::vector<std::uint8_t> rgb_;
};

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace scenechain
