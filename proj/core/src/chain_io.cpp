#include "scenechain/chain_io.hpp"

#include <algorithm>
#include <sstream>

#include "scenechain/error.hpp"

namespace scenechain {

Json edit_chain_to_json(const EditChain& chain) {
  Json j = Json::object();
  j["scene_id"] = chain.scene_id;
  j["instruction"] = chain.instruction;
  Json turns = Json::array();
  for (std::size_t t = 0; t < chain.turns.size(); ++t) {
    const EditTurn& turn = chain.turns[t];
    Json jt = Json::object();
    jt["turn"] = t;
    jt["think"] = turn.cot_stub;
    Json calls = Json::array();
    for (const auto& c : turn.forward_calls) calls.push_back(tool_call_to_json(c));
    jt["tool_calls"] = std::move(calls);
    jt["scene_before"] = scene_to_json(turn.scene_before);
    jt["scene_after"] = scene_to_json(turn.scene_after);
    turns.push_back(std::move(jt));
  }
  j["turns"] = std::move(turns);
  j["final_scene"] = scene_to_json(chain.final_scene);
  return j;
}

EditChain edit_chain_from_json(const Json& j) {
  try {
    EditChain chain;
    chain.scene_id = j.at("scene_id").get<std::string>();
    chain.instruction = j.at("instruction").get<std::string>();
    for (const auto& jt : j.at("turns")) {
      EditTurn turn;
      turn.cot_stub = jt.at("think").get<std::string>();
      for (const auto& c : jt.at("tool_calls")) turn.forward_calls.push_back(tool_call_from_json_strict(c));
      turn.scene_before = scene_from_json(jt.at("scene_before"));
      turn.scene_after = scene_from_json(jt.at("scene_after"));
      chain.turns.push_back(std::move(turn));
    }
    chain.final_scene = scene_from_json(j.at("final_scene"));
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedJson, std::string("edit chain: ") + e.what());
  }
}

void write_dataset(const std::filesystem::path& out_dir, const std::vector<SceneChains>& dataset) {
  std::filesystem::create_directories(out_dir);
  std::string index;
  for (const auto& scene : dataset) {
    const std::filesystem::path dir = out_dir / scene.scene_id;
    std::filesystem::create_directories(dir);
    Json scores = Json::array();
    for (std::size_t k = 0; k < scene.kept.size(); ++k) {
      const ScoredChain& sc = scene.kept[k];
      const std::string name = "chain_" + std::to_string(k) + ".json";
      Json chain = edit_chain_to_json(sc.chain);
      Json doc = Json::object();
      doc["candidate"] = sc.candidate;
      doc["seed"] = std::to_string(sc.seed);
      for (auto& [key, value] : chain.items()) doc[key] = value;
      write_text_file_atomic(dir / name, write_json(doc, FloatFormat::Fixed6));

      Json entry = Json::object();
      entry["chain"] = name;
      entry["candidate"] = sc.candidate;
      entry["seed"] = std::to_string(sc.seed);
      const Json score = chain_score_to_json(sc.score);
      for (const auto& [key, value] : score.items()) entry[key] = value;
      scores.push_back(std::move(entry));

      Json line = Json::object();
      line["scene_id"] = scene.scene_id;
      line["chain_path"] = scene.scene_id + "/" + name;
      line["overall_score"] = sc.score.overall;
      index += write_json_line(line, FloatFormat::Fixed6);
      index += '\n';
    }
    write_text_file_atomic(dir / "scores.json", write_json(scores, FloatFormat::Fixed6));
  }
  write_text_file_atomic(out_dir / "index.jsonl", index);
}

std::vector<DatasetEntry> read_dataset_index(const std::filesystem::path& dataset_dir) {
  std::istringstream in(read_text_file(dataset_dir / "index.jsonl"));
  std::vector<DatasetEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      out.push_back({j.at("scene_id").get<std::string>(), j.at("chain_path").get<std::string>(),
                     j.at("overall_score").get<int>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedJson, "index.jsonl line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

EditChain read_chain_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedJson, path.string() + ": " + e.what());
  }
  return edit_chain_from_json(j);
}

std::vector<NamedScene> load_scene_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedScene> out;
  for (const auto& f : files) {
    try {
      out.push_back({f.stem().string(), parse_scene_json(read_text_file(f))});
    } catch (const Error& e) {
      throw Error(e.code(), f.filename().string() + ": " + e.detail());
    }
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "no .json scenes in " + dir.string());
  return out;
}

}  // namespace scenechain
