#include "scenechain/remote.hpp"

#include <algorithm>

#include <httplib.h>

#include "scenechain/chain_io.hpp"
#include "scenechain/error.hpp"

namespace scenechain {

HttpEndpoint HttpEndpoint::parse(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorCode::InvalidConfig, "expected an http:// URL, got '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  HttpEndpoint ep;
  ep.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) ep.base_path = url.substr(path_start);
  while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  if (ep.scheme_host_port.size() <= scheme_end + 3) throw Error(ErrorCode::InvalidConfig, "URL has no host: " + url);
  return ep;
}

std::string http_post_json(const HttpEndpoint& endpoint, const std::string& route, const Json& body,
                           const HttpOptions& opts, ErrorCode transport_code) {
  httplib::Client client(endpoint.scheme_host_port);
  const auto secs = static_cast<time_t>(opts.timeout_seconds);
  const auto usecs = static_cast<time_t>((opts.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  const std::string path = endpoint.base_path + route;
  const std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
  }
  throw Error(transport_code, "POST " + endpoint.scheme_host_port + path + " failed: " + last_error);
}

namespace {

[[noreturn]] void non_conforming(const std::string& what, const std::string& body) {
  throw Error(ErrorCode::NonConformingResponse, what + "; reply was: " + body);
}

std::string strip_fence(const std::string& body) {
  std::string s = body;
  const auto open = s.find("```");
  if (open == std::string::npos) return s;
  auto start = s.find('\n', open);
  if (start == std::string::npos) return s;
  const auto close = s.find("```", start);
  return s.substr(start + 1, close == std::string::npos ? std::string::npos : close - start - 1);
}

}  // namespace

Json parse_reply_json(const std::string& body) {
  try {
    return Json::parse(strip_fence(body));
  } catch (const Json::exception&) {
    non_conforming("reply is not JSON", body);
  }
}

std::string HttpPolicy::act(const Observation& obs) {
  const std::string body = http_post_json(endpoint_, "/act", obs.to_json(true), opts_, ErrorCode::PolicyTransport);
  const Json j = parse_reply_json(body);
  if (!j.is_object() || !j.contains("text") || !j.at("text").is_string()) {
    non_conforming("policy reply must be {\"text\": string}", body);
  }
  return j.at("text").get<std::string>();
}

int parse_improvement_reply(const std::string& body) {
  Json j = parse_reply_json(body);
  if (j.is_object() && j.contains("improvement")) j = j.at("improvement");
  if (!j.is_number()) non_conforming("improvement must be one of -1, 0, 1", body);
  const double v = j.get<double>();
  if (!is_improvement_value(v)) non_conforming("improvement must be one of -1, 0, 1", body);
  return static_cast<int>(v);
}

std::vector<std::string> parse_mandatory_reply(const std::string& body) {
  const Json j = parse_reply_json(body);
  if (!j.is_object() || !j.contains("mandatory_objects") || !j.at("mandatory_objects").is_array()) {
    non_conforming("expected {\"mandatory_objects\": [...]}", body);
  }
  std::vector<std::string> items;
  for (const auto& v : j.at("mandatory_objects")) {
    if (!v.is_string() || v.get<std::string>().empty()) non_conforming("mandatory objects must be strings", body);
    items.push_back(v.get<std::string>());
  }
  if (items.size() < 5 || items.size() > 15) non_conforming("mandatory list must hold 5 to 15 items", body);
  return items;
}

RelevanceVerdict parse_relevance_reply(const std::string& body) {
  const Json j = parse_reply_json(body);
  if (!j.is_object() || !j.contains("relevant_objects") || !j.contains("irrelevant_objects")) {
    non_conforming("expected relevant_objects and irrelevant_objects", body);
  }
  RelevanceVerdict v;
  for (const auto& [key, out] : {std::pair{"relevant_objects", &v.relevant}, std::pair{"irrelevant_objects", &v.irrelevant}}) {
    if (!j.at(key).is_array()) non_conforming(std::string(key) + " must be a list", body);
    for (const auto& s : j.at(key)) {
      if (!s.is_string()) non_conforming(std::string(key) + " must hold strings", body);
      out->push_back(s.get<std::string>());
    }
  }
  return v;
}

ConsolidatedScores parse_consolidated_reply(const std::string& body) {
  const Json j = parse_reply_json(body);
  if (!j.is_object()) non_conforming("expected a JSON object", body);
  auto field = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) non_conforming(std::string("missing score '") + key + "'", body);
    const double v = j.at(key).get<double>();
    if (!is_consolidated_value(v)) non_conforming(std::string("score '") + key + "' must be one of -1, -0.5, 0, 0.5, 1", body);
    return v;
  };
  ConsolidatedScores c;
  c.rationality = field("rationality");
  c.requirement_match = field("requirement_match");
  c.scene_graph = field("scene_graph");
  return c;
}

int HttpJudge::improvement(const Scene& before, const Scene& after, const JudgeContext& ctx) {
  const Json req{{"instruction", ctx.instruction},
                 {"room_type", ctx.room_type},
                 {"mandatory_objects", ctx.mandatory},
                 {"before", scene_to_json(before)},
                 {"after", scene_to_json(after)}};
  return parse_improvement_reply(http_post_json(endpoint_, "/improve", req, opts_, ErrorCode::JudgeTransport));
}

MandatoryObjects HttpJudge::mandatory(const std::string& instruction, const std::string& room_type) {
  const Json req{{"instruction", instruction}, {"room_type", room_type}};
  MandatoryObjects m;
  m.room_type = catalog_.match_room_type(room_type).value_or(room_type);
  for (const auto& item : parse_mandatory_reply(http_post_json(endpoint_, "/mandatory", req, opts_, ErrorCode::JudgeTransport))) {
    m.items.push_back(catalog_.category_of(item));
  }
  if (auto essential = catalog_.essential_for(m.room_type)) {
    if (std::find(m.items.begin(), m.items.end(), *essential) != m.items.end()) m.essential = essential;
  }
  return m;
}

RelevanceVerdict HttpJudge::relevance(const std::vector<std::string>& added_descriptions, const JudgeContext& ctx) {
  const Json req{{"instruction", ctx.instruction}, {"room_type", ctx.room_type}, {"new_objects", added_descriptions}};
  return parse_relevance_reply(http_post_json(endpoint_, "/relevance", req, opts_, ErrorCode::JudgeTransport));
}

ConsolidatedScores HttpJudge::consolidated(const Scene& scene, const JudgeContext& ctx) {
  const Json req{{"instruction", ctx.instruction}, {"room_type", ctx.room_type}, {"scene", scene_to_json(scene)}};
  return parse_consolidated_reply(http_post_json(endpoint_, "/consolidate", req, opts_, ErrorCode::JudgeTransport));
}

ChainScore HttpChainJudge::score(const EditChain& chain) {
  const std::string body =
      http_post_json(endpoint_, "/score_chain", edit_chain_to_json(chain), opts_, ErrorCode::JudgeTransport);
  try {
    return chain_score_from_json(parse_reply_json(body));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonConformingResponse) throw;
    non_conforming(e.detail(), body);
  } catch (const Json::exception& e) {
    non_conforming(e.what(), body);
  }
}

}  // namespace scenechain
