#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace scenechain {

using Json = nlohmann::ordered_json;

enum class FloatFormat {
  Fixed6,     // "%.6f": the canonical scene format, byte-stable for golden files
  RoundTrip,  // shortest representation that parses back to the same double
};

// Pretty-prints with two-space indentation; arrays made only of scalars are
// kept on one line. Key order is the insertion order of the ordered_json.
std::string write_json(const Json& value, FloatFormat floats, int indent = 2);

// Single-line form, used for JSONL records.
std::string write_json_line(const Json& value, FloatFormat floats);

std::string format_fixed6(double value);

std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace scenechain
