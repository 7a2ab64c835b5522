#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <numbers>
#include <set>
#include <zlib.h>

#include "builders.hpp"
#include "scenechain/png.hpp"
#include "scenechain/render.hpp"

using namespace scenechain;
using testing_support::box;
using testing_support::rect_scene;

namespace {

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

struct DecodedPng {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  Rgb at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

// Minimal reader for unfiltered 8-bit RGB files; checks every chunk CRC.
DecodedPng decode_png(const std::vector<std::uint8_t>& bytes) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  REQUIRE(bytes.size() > 8);
  REQUIRE(std::memcmp(bytes.data(), sig, 8) == 0);
  DecodedPng out;
  std::vector<std::uint8_t> idat;
  std::size_t pos = 8;
  bool ended = false;
  while (pos + 12 <= bytes.size()) {
    const std::uint32_t len = be32(&bytes[pos]);
    const std::string type(reinterpret_cast<const char*>(&bytes[pos + 4]), 4);
    const std::uint8_t* data = &bytes[pos + 8];
    const std::uint32_t crc = be32(&bytes[pos + 8 + len]);
    CHECK(crc == static_cast<std::uint32_t>(crc32(crc32(0, nullptr, 0), &bytes[pos + 4], len + 4)));
    if (type == "IHDR") {
      out.width = static_cast<int>(be32(data));
      out.height = static_cast<int>(be32(data + 4));
      CHECK(data[8] == 8);
      CHECK(data[9] == 2);
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      ended = true;
    }
    pos += 12 + len;
  }
  CHECK(ended);
  CHECK(pos == bytes.size());
  const std::size_t stride = static_cast<std::size_t>(out.width) * 3 + 1;
  std::vector<std::uint8_t> raw(stride * static_cast<std::size_t>(out.height));
  uLongf raw_len = static_cast<uLongf>(raw.size());
  REQUIRE(uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) == Z_OK);
  REQUIRE(raw_len == raw.size());
  for (int y = 0; y < out.height; ++y) {
    const auto* row = &raw[static_cast<std::size_t>(y) * stride];
    REQUIRE(row[0] == 0);
    out.rgb.insert(out.rgb.end(), row + 1, row + stride);
  }
  return out;
}

Scene bedroom_scene() {
  Scene s = rect_scene(4, 4);
  s.objects.push_back(box("double_bed_1", "double bed", {2.0, 0.25, 2.0}, {2.0, 0.5, 1.6}));
  s.objects.push_back(box("side_table_1", "side table", {3.5, 0.25, 0.5}, {0.5, 0.5, 0.5}));
  s.objects.push_back(box("table_lamp_1", "table lamp", {3.5, 0.7, 0.5}, {0.3, 0.4, 0.3}));
  return s;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("render") {
  TEST_CASE("empty room draws the floor and a one meter grid") {
    const Scene s = rect_scene(4, 4);
    const auto items = topdown_display_list(s, RenderOptions{});
    int polygons = 0, lines = 0, owned = 0;
    for (const auto& it : items) {
      polygons += it.kind == DrawKind::Polygon;
      lines += it.kind == DrawKind::Line;
      owned += !it.owner.empty();
    }
    CHECK(polygons == 1);
    CHECK(lines == 10);
    CHECK(owned == 0);

    const std::string svg = render_topdown(s);
    CHECK(count_of(svg, "class=\"grid-x\"") == 5);
    CHECK(count_of(svg, "class=\"grid-z\"") == 5);
    CHECK(count_of(svg, "class=\"object\"") == 0);
    CHECK(svg.find("x=2.00") != std::string::npos);
  }

  TEST_CASE("box corners land on the expected pixels") {
    const Scene s = bedroom_scene();
    // 4 m span over 512 - 2 * 32 px.
    const double scale = 448.0 / 4.0;
    const auto items = topdown_display_list(s, RenderOptions{});
    const auto bed = std::find_if(items.begin(), items.end(), [](const DrawItem& it) {
      return it.owner == "double_bed_1" && it.kind == DrawKind::Polygon;
    });
    REQUIRE(bed != items.end());
    double lo_x = 1e9, hi_x = -1e9, lo_y = 1e9, hi_y = -1e9;
    for (const auto& p : bed->points) {
      lo_x = std::min(lo_x, p.x);
      hi_x = std::max(hi_x, p.x);
      lo_y = std::min(lo_y, p.z);
      hi_y = std::max(hi_y, p.z);
    }
    CHECK(lo_x == doctest::Approx(32 + 1.0 * scale).epsilon(1e-12));
    CHECK(hi_x == doctest::Approx(32 + 3.0 * scale).epsilon(1e-12));
    CHECK(lo_y == doctest::Approx(32 + 1.2 * scale).epsilon(1e-12));
    CHECK(hi_y == doctest::Approx(32 + 2.8 * scale).epsilon(1e-12));
    CHECK(bed->fill == uid_color("double_bed_1"));

    // SVG frame: 80 px/m with a 40 px margin.
    const TopdownFrame f = topdown_frame(s.room, 80.0);
    CHECK(f.width == doctest::Approx(400.0));
    const Vec2 corner = f.to_screen({1.0, 1.2});
    CHECK(corner.x == doctest::Approx(120.0));
    CHECK(corner.z == doctest::Approx(136.0));
    const std::string svg = render_topdown(s);
    CHECK(svg.find("120.00,136.00") != std::string::npos);
    CHECK(count_of(svg, "class=\"object\"") == 3);
    CHECK(svg.find("double bed (double_bed_1)") != std::string::npos);
  }

  TEST_CASE("rotated box footprint in the SVG") {
    Scene s = rect_scene(4, 4);
    s.objects.push_back(box("rug_1", "rug", {2.0, 0.005, 2.0}, {2.0, 0.01, 1.0}, std::numbers::pi / 2));
    const std::string svg = render_topdown(s);
    // A quarter turn swaps the extents: x in [1.5, 2.5], z in [1, 3].
    CHECK(svg.find("160.00,120.00") != std::string::npos);
    CHECK(svg.find("240.00,280.00") != std::string::npos);
  }

  TEST_CASE("isometric paint order and ownership") {
    const Scene s = bedroom_scene();
    const auto items = isometric_display_list(s, RenderOptions{});
    std::vector<std::string> runs;
    for (const auto& it : items) {
      if (it.owner.empty()) continue;
      if (runs.empty() || runs.back() != it.owner) runs.push_back(it.owner);
    }
    // Each object is painted as one contiguous run.
    CHECK(runs.size() == 3);
    CHECK(std::set<std::string>(runs.begin(), runs.end()).size() == 3);
    const auto table = std::find(runs.begin(), runs.end(), "side_table_1");
    const auto lamp = std::find(runs.begin(), runs.end(), "table_lamp_1");
    CHECK(table < lamp);
    // Top face is the last item of a run.
    const auto last_lamp = std::find_if(items.rbegin(), items.rend(), [](const DrawItem& it) { return it.owner == "table_lamp_1"; });
    CHECK(last_lamp->fill == uid_color("table_lamp_1"));

    std::map<std::string, int> per_owner;
    for (const auto& it : topdown_display_list(s, RenderOptions{})) {
      if (it.kind == DrawKind::Polygon && !it.owner.empty()) ++per_owner[it.owner];
    }
    CHECK(per_owner.size() == 3);
    for (const auto& [uid, n] : per_owner) CHECK(n == 1);
  }

  TEST_CASE("png output decodes and shows the objects") {
    const Scene s = bedroom_scene();
    const auto bytes = render_png(s);
    const DecodedPng img = decode_png(bytes);
    CHECK(img.width == kPanelSize);
    CHECK(img.height == kPanelSize);
    CHECK(img.at(2, 2) == Rgb{255, 255, 255});
    // Inside the bed, clear of grid lines, edges and the label.
    CHECK(img.at(180, 200) == uid_color("double_bed_1"));

    RenderOptions merged;
    merged.merged = true;
    const DecodedPng wide = decode_png(render_png(s, merged));
    CHECK(wide.width == 2 * kPanelSize);
    CHECK(wide.height == kPanelSize);
    CHECK(render_merged(s) == render_png(s, merged));
  }

  TEST_CASE("rendering is deterministic") {
    const Scene s = bedroom_scene();
    CHECK(render_png(s) == render_png(s));
    CHECK(render_merged(s) == render_merged(s));
    CHECK(render_topdown(s) == render_topdown(s));
    CHECK(uid_color("a") == uid_color("a"));
    CHECK(uid_color("chair_1") != uid_color("chair_2"));
  }

  TEST_CASE("base64 encoding") {
    CHECK(base64_encode({}).empty());
    CHECK(base64_encode({'f'}) == "Zg==");
    CHECK(base64_encode({'f', 'o'}) == "Zm8=");
    CHECK(base64_encode({'f', 'o', 'o', 'b', 'a', 'r'}) == "Zm9vYmFy");
  }
}
