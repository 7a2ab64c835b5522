#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scenechain/chain_synth.hpp"

namespace scenechain {

Json edit_chain_to_json(const EditChain& chain);
EditChain edit_chain_from_json(const Json& j);

struct DatasetEntry {
  std::string scene_id;
  std::filesystem::path chain_path;  // relative to the dataset root
  int overall_score = 0;
};

// Layout: <out>/<scene_id>/chain_<k>.json, <out>/<scene_id>/scores.json and
// <out>/index.jsonl. Files are canonical and byte-stable.
void write_dataset(const std::filesystem::path& out_dir, const std::vector<SceneChains>& dataset);

std::vector<DatasetEntry> read_dataset_index(const std::filesystem::path& dataset_dir);
EditChain read_chain_file(const std::filesystem::path& path);

std::vector<NamedScene> load_scene_dir(const std::filesystem::path& dir);

}  // namespace scenechain
