#include "scenechain/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "scenechain/geometry.hpp"
#include "scenechain/png.hpp"
#include "scenechain/rng.hpp"

namespace scenechain {

namespace {

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kFloor{243, 239, 230};
constexpr Rgb kWall{51, 51, 51};
constexpr Rgb kGrid{200, 200, 200};
constexpr Rgb kLabel{90, 90, 90};
constexpr Rgb kText{20, 20, 20};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Rgb shade(Rgb c, double f) {
  return {static_cast<std::uint8_t>(std::lround(c[0] * f)), static_cast<std::uint8_t>(std::lround(c[1] * f)),
          static_cast<std::uint8_t>(std::lround(c[2] * f))};
}

struct Bounds {
  double min_x, max_x, min_z, max_z;
};

Bounds footprint_bounds(const Polygon2& fp) {
  Bounds b{fp[0].x, fp[0].x, fp[0].z, fp[0].z};
  for (const auto& p : fp) {
    b.min_x = std::min(b.min_x, p.x);
    b.max_x = std::max(b.max_x, p.x);
    b.min_z = std::min(b.min_z, p.z);
    b.max_z = std::max(b.max_z, p.z);
  }
  return b;
}

std::vector<double> grid_values(double lo, double hi, double step) {
  std::vector<double> v;
  for (double g = std::ceil(lo / step - 1e-9) * step; g <= hi + 1e-9; g += step) v.push_back(std::fabs(g) < 1e-12 ? 0.0 : g);
  return v;
}

std::string short_label(const SceneObject& o) { return o.uid.size() > 18 ? o.uid.substr(0, 18) : o.uid; }

}  // namespace

Rgb uid_color(std::string_view uid) {
  const std::uint64_t h = splitmix64(fnv1a64(uid));
  const double hue = static_cast<double>(h % 360);
  const double s = 0.55 + 0.3 * static_cast<double>((h >> 16) % 100) / 100.0;
  const double v = 0.75 + 0.2 * static_cast<double>((h >> 32) % 100) / 100.0;
  const double c = v * s;
  const double x = c * (1.0 - std::fabs(std::fmod(hue / 60.0, 2.0) - 1.0));
  const double m = v - c;
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue / 60.0)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  auto to8 = [&](double u) { return static_cast<std::uint8_t>(std::lround((u + m) * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

TopdownFrame topdown_frame(const RoomGeometry& room, double px_per_meter) {
  const Bounds b = footprint_bounds(room.footprint());
  TopdownFrame f;
  f.min_x = b.min_x;
  f.min_z = b.min_z;
  f.scale = px_per_meter;
  f.width = 2 * f.margin + (b.max_x - b.min_x) * px_per_meter;
  f.height = 2 * f.margin + (b.max_z - b.min_z) * px_per_meter;
  return f;
}

std::string render_topdown(const Scene& scene, const RenderOptions& opts) {
  const TopdownFrame f = topdown_frame(scene.room, opts.px_per_meter);
  const Polygon2 fp = scene.room.footprint();
  const Bounds b = footprint_bounds(fp);
  auto pts = [&](const auto& poly) {
    std::string s;
    for (const Vec2& p : poly) {
      const Vec2 q = f.to_screen(p);
      if (!s.empty()) s += ' ';
      s += fmt2(q.x) + "," + fmt2(q.z);
    }
    return s;
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(f.width) + "\" height=\"" +
                    fmt2(f.height) + "\" viewBox=\"0 0 " + fmt2(f.width) + " " + fmt2(f.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<polygon class=\"floor\" points=\"" + pts(fp) + "\" fill=\"" + hex(kFloor) +
         "\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
  svg += "<g class=\"grid\" stroke=\"#c8c8c8\" stroke-width=\"1\" font-family=\"monospace\" font-size=\"10\">\n";
  for (double x : grid_values(b.min_x, b.max_x, opts.grid_step)) {
    const Vec2 a = f.to_screen({x, b.min_z});
    const Vec2 c = f.to_screen({x, b.max_z});
    svg += "<line class=\"grid-x\" x1=\"" + fmt2(a.x) + "\" y1=\"" + fmt2(a.z) + "\" x2=\"" + fmt2(c.x) + "\" y2=\"" +
           fmt2(c.z) + "\"/>\n";
    svg += "<text x=\"" + fmt2(a.x) + "\" y=\"" + fmt2(a.z - 6) + "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#5a5a5a\">x=" +
           fmt2(x) + "</text>\n";
  }
  for (double z : grid_values(b.min_z, b.max_z, opts.grid_step)) {
    const Vec2 a = f.to_screen({b.min_x, z});
    const Vec2 c = f.to_screen({b.max_x, z});
    svg += "<line class=\"grid-z\" x1=\"" + fmt2(a.x) + "\" y1=\"" + fmt2(a.z) + "\" x2=\"" + fmt2(c.x) + "\" y2=\"" +
           fmt2(c.z) + "\"/>\n";
    svg += "<text x=\"" + fmt2(a.x - 4) + "\" y=\"" + fmt2(a.z + 3) + "\" text-anchor=\"end\" stroke=\"none\" fill=\"#5a5a5a\">z=" +
           fmt2(z) + "</text>\n";
  }
  svg += "</g>\n<g class=\"objects\" font-family=\"monospace\" font-size=\"11\">\n";
  for (const auto& o : scene.objects) {
    const Obb box = obb_from_object(o);
    const auto corners = footprint_corners(box);
    const Rgb color = uid_color(o.uid);
    svg += "<polygon class=\"object\" data-uid=\"" + xml_escape(o.uid) + "\" points=\"" + pts(corners) + "\" fill=\"" +
           hex(color) + "\" fill-opacity=\"0.55\" stroke=\"" + hex(shade(color, 0.6)) + "\" stroke-width=\"1.5\"/>\n";
    const double yaw = box.yaw;
    const Vec2 c{o.position.x, o.position.z};
    const Vec2 front = c + Vec2{std::sin(yaw), std::cos(yaw)} * box.half_extents.z;
    const Vec2 sc = f.to_screen(c);
    const Vec2 sf = f.to_screen(front);
    svg += "<line class=\"heading\" x1=\"" + fmt2(sc.x) + "\" y1=\"" + fmt2(sc.z) + "\" x2=\"" + fmt2(sf.x) + "\" y2=\"" +
           fmt2(sf.z) + "\" stroke=\"" + hex(shade(color, 0.6)) + "\" stroke-width=\"1.5\"/>\n";
    if (opts.label_boxes) {
      svg += "<text x=\"" + fmt2(sc.x) + "\" y=\"" + fmt2(sc.z) + "\" text-anchor=\"middle\" fill=\"#141414\">" +
             xml_escape(o.description) + " (" + xml_escape(o.uid) + ")</text>\n";
    }
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::vector<DrawItem> topdown_display_list(const Scene& scene, const RenderOptions& opts, int size) {
  const Polygon2 fp = scene.room.footprint();
  const Bounds b = footprint_bounds(fp);
  const double margin = 32.0;
  const double span = std::max(b.max_x - b.min_x, b.max_z - b.min_z);
  TopdownFrame f;
  f.min_x = b.min_x;
  f.min_z = b.min_z;
  f.margin = margin;
  f.scale = span > 0 ? (size - 2 * margin) / span : 1.0;
  auto map = [&](const auto& poly) {
    std::vector<Vec2> out;
    for (const Vec2& p : poly) out.push_back(f.to_screen(p));
    return out;
  };

  std::vector<DrawItem> items;
  items.push_back({DrawKind::Polygon, map(fp), kFloor, true, kWall, true, "", ""});
  for (double x : grid_values(b.min_x, b.max_x, opts.grid_step)) {
    items.push_back({DrawKind::Line, map(Polygon2{{x, b.min_z}, {x, b.max_z}}), kGrid, false, kGrid, true, "", ""});
    const Vec2 at = f.to_screen({x, b.min_z});
    char buf[16];
    std::snprintf(buf, sizeof buf, "%g", x);
    items.push_back({DrawKind::Text, {{at.x - 3, at.z - 12}}, kLabel, true, kLabel, false, buf, ""});
  }
  for (double z : grid_values(b.min_z, b.max_z, opts.grid_step)) {
    items.push_back({DrawKind::Line, map(Polygon2{{b.min_x, z}, {b.max_x, z}}), kGrid, false, kGrid, true, "", ""});
    const Vec2 at = f.to_screen({b.min_x, z});
    char buf[16];
    std::snprintf(buf, sizeof buf, "%g", z);
    items.push_back({DrawKind::Text, {{at.x - 26, at.z - 3}}, kLabel, true, kLabel, false, buf, ""});
  }
  for (const auto& o : scene.objects) {
    const auto corners = footprint_corners(obb_from_object(o));
    const Rgb color = uid_color(o.uid);
    items.push_back({DrawKind::Polygon, map(corners), color, true, shade(color, 0.6), true, "", o.uid});
    if (opts.label_boxes) {
      const Vec2 c = f.to_screen({o.position.x, o.position.z});
      const std::string label = short_label(o);
      items.push_back({DrawKind::Text, {{c.x - 3.0 * static_cast<double>(label.size()), c.z - 3}}, kText, true, kText,
                       false, label, o.uid});
    }
  }
  return items;
}

std::vector<DrawItem> isometric_display_list(const Scene& scene, const RenderOptions& opts, int size) {
  const double c30 = std::cos(std::numbers::pi / 6.0);
  const double s30 = 0.5;
  auto project = [&](double x, double y, double z) { return Vec2{(x - z) * c30, (x + z) * s30 - y}; };

  const Polygon2 fp = scene.room.footprint();
  std::vector<Vec2> extent;
  for (const auto& p : fp) {
    extent.push_back(project(p.x, 0.0, p.z));
    extent.push_back(project(p.x, scene.room.ceiling_height(), p.z));
  }
  double lo_u = extent[0].x, hi_u = extent[0].x, lo_v = extent[0].z, hi_v = extent[0].z;
  for (const auto& e : extent) {
    lo_u = std::min(lo_u, e.x);
    hi_u = std::max(hi_u, e.x);
    lo_v = std::min(lo_v, e.z);
    hi_v = std::max(hi_v, e.z);
  }
  const double margin = 24.0;
  const double scale = (size - 2 * margin) / std::max(hi_u - lo_u, hi_v - lo_v);
  const double off_u = margin + ((size - 2 * margin) - (hi_u - lo_u) * scale) / 2.0;
  const double off_v = margin + ((size - 2 * margin) - (hi_v - lo_v) * scale) / 2.0;
  auto screen = [&](double x, double y, double z) {
    const Vec2 p = project(x, y, z);
    return Vec2{off_u + (p.x - lo_u) * scale, off_v + (p.z - lo_v) * scale};
  };

  std::vector<DrawItem> items;
  std::vector<Vec2> floor;
  for (const auto& p : fp) floor.push_back(screen(p.x, 0.0, p.z));
  items.push_back({DrawKind::Polygon, floor, kFloor, true, kWall, true, "", ""});
  (void)opts;

  std::vector<const SceneObject*> order;
  for (const auto& o : scene.objects) order.push_back(&o);
  std::stable_sort(order.begin(), order.end(), [](const SceneObject* a, const SceneObject* b) {
    const double da = a->position.x + a->position.y + a->position.z;
    const double db = b->position.x + b->position.y + b->position.z;
    if (da != db) return da < db;
    return a->uid < b->uid;
  });
  for (const SceneObject* o : order) {
    const auto corners = footprint_corners(obb_from_object(*o));
    const double y0 = o->bottom();
    const double y1 = o->top();
    const Rgb color = uid_color(o->uid);
    const Rgb edge = shade(color, 0.45);
    const Vec2 centre{o->position.x, o->position.z};
    for (std::size_t e = 0; e < 4; ++e) {
      const Vec2 a = corners[e];
      const Vec2 b = corners[(e + 1) % 4];
      const Vec2 mid = (a + b) * 0.5;
      const Vec2 outward = mid - centre;
      if (outward.x + outward.z <= 0.0) continue;  // faces away from the camera
      items.push_back({DrawKind::Polygon,
                       {screen(a.x, y0, a.z), screen(b.x, y0, b.z), screen(b.x, y1, b.z), screen(a.x, y1, a.z)},
                       shade(color, outward.x > outward.z ? 0.65 : 0.8),
                       true,
                       edge,
                       true,
                       "",
                       o->uid});
    }
    std::vector<Vec2> top;
    for (const auto& c : corners) top.push_back(screen(c.x, y1, c.z));
    items.push_back({DrawKind::Polygon, top, color, true, edge, true, "", o->uid});
  }
  return items;
}

std::vector<std::uint8_t> render_merged(const Scene& scene, RenderOptions opts) {
  opts.merged = true;
  Canvas canvas(2 * kPanelSize, kPanelSize, kWhite);
  canvas.draw(topdown_display_list(scene, opts));
  canvas.draw(isometric_display_list(scene, opts), static_cast<double>(kPanelSize));
  canvas.draw_line({static_cast<double>(kPanelSize), 0}, {static_cast<double>(kPanelSize), kPanelSize - 1.0}, kWall);
  canvas.draw_text({8, 8}, "TOP-DOWN", kText);
  canvas.draw_text({kPanelSize + 8.0, 8}, "ISOMETRIC", kText);
  return canvas.encode_png();
}

std::vector<std::uint8_t> render_png(const Scene& scene, const RenderOptions& opts) {
  if (opts.merged) return render_merged(scene, opts);
  Canvas canvas(kPanelSize, kPanelSize, kWhite);
  canvas.draw(topdown_display_list(scene, opts));
  return canvas.encode_png();
}

}  // namespace scenechain
