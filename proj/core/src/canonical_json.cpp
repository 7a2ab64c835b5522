#include "scenechain/canonical_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scenechain/error.hpp"

namespace scenechain {
namespace {

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

void write_scalar(std::string& out, const Json& v, FloatFormat floats) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      out += "null";
    } else if (floats == FloatFormat::Fixed6) {
      out += format_fixed6(d);
    } else {
      out += Json(d).dump();
    }
    return;
  }
  out += v.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

void write_value(std::string& out, const Json& v, FloatFormat floats, int indent, int depth) {
  const bool compact = indent < 0;
  auto newline = [&](int d) {
    if (compact) return;
    out += '\n';
    out.append(static_cast<std::size_t>(d * indent), ' ');
  };

  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      out += Json(it.key()).dump();
      out += compact ? ":" : ": ";
      write_value(out, it.value(), floats, indent, depth + 1);
    }
    newline(depth);
    out += '}';
    return;
  }
  if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    bool flat = true;
    for (const auto& e : v) flat = flat && is_scalar(e);
    out += '[';
    bool first = true;
    for (const auto& e : v) {
      if (!first) out += (flat && !compact) ? ", " : ",";
      first = false;
      if (!flat) newline(depth + 1);
      write_value(out, e, floats, indent, depth + 1);
    }
    if (!flat) newline(depth);
    out += ']';
    return;
  }
  write_scalar(out, v, floats);
}

}  // namespace

std::string format_fixed6(double value) {
  if (value == 0.0) value = 0.0;  // folds -0.0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string write_json(const Json& value, FloatFormat floats, int indent) {
  std::string out;
  write_value(out, value, floats, indent, 0);
  out += '\n';
  return out;
}

std::string write_json_line(const Json& value, FloatFormat floats) {
  std::string out;
  write_value(out, value, floats, -1, 0);
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename into " + path.string() + ": " + ec.message());
}

}  // namespace scenechain
