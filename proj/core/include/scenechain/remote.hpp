#pragma once

#include <memory>
#include <string>

#include "scenechain/assets.hpp"
#include "scenechain/chain_synth.hpp"
#include "scenechain/error.hpp"
#include "scenechain/judge.hpp"
#include "scenechain/policy.hpp"

namespace scenechain {

struct HttpEndpoint {
  std::string scheme_host_port;  // e.g. "http://127.0.0.1:8080"
  std::string base_path;         // prefix for every route, no trailing slash

  // Accepts "http://host[:port][/prefix]".
  static HttpEndpoint parse(const std::string& url);
};

struct HttpOptions {
  double timeout_seconds = 30.0;
  int retries = 1;
};

// POSTs a JSON body and returns the response body. Transport failures and
// non-2xx statuses are retried; the final failure throws `transport_code`.
std::string http_post_json(const HttpEndpoint& endpoint, const std::string& route, const Json& body,
                           const HttpOptions& opts, ErrorCode transport_code);

// Parses a judge/policy reply that may be wrapped in a ```json fence.
// Throws NonConformingResponse with the body verbatim.
Json parse_reply_json(const std::string& body);

// POST /act with the observation (render attached as base64) -> {"text": ...}
class HttpPolicy : public Policy {
 public:
  HttpPolicy(HttpEndpoint endpoint, HttpOptions opts = {}) : endpoint_(std::move(endpoint)), opts_(opts) {}
  std::string act(const Observation& obs) override;

 private:
  HttpEndpoint endpoint_;
  HttpOptions opts_;
};

// Routes: /improve, /mandatory, /relevance, /consolidate. Replies are held to
// the exact value sets of the judge protocol.
class HttpJudge : public Judge {
 public:
  HttpJudge(HttpEndpoint endpoint, const AssetCatalog& catalog, HttpOptions opts = {})
      : endpoint_(std::move(endpoint)), catalog_(catalog), opts_(opts) {}
  int improvement(const Scene& before, const Scene& after, const JudgeContext& ctx) override;
  MandatoryObjects mandatory(const std::string& instruction, const std::string& room_type) override;
  RelevanceVerdict relevance(const std::vector<std::string>& added_descriptions, const JudgeContext& ctx) override;
  ConsolidatedScores consolidated(const Scene& scene, const JudgeContext& ctx) override;

 private:
  HttpEndpoint endpoint_;
  const AssetCatalog& catalog_;
  HttpOptions opts_;
};

// POST /score_chain with the chain JSON -> chain score object.
class HttpChainJudge : public ChainJudge {
 public:
  HttpChainJudge(HttpEndpoint endpoint, HttpOptions opts = {}) : endpoint_(std::move(endpoint)), opts_(opts) {}
  ChainScore score(const EditChain& chain) override;

 private:
  HttpEndpoint endpoint_;
  HttpOptions opts_;
};

// Reply validators, exposed for tests.
int parse_improvement_reply(const std::string& body);
std::vector<std::string> parse_mandatory_reply(const std::string& body);
RelevanceVerdict parse_relevance_reply(const std::string& body);
ConsolidatedScores parse_consolidated_reply(const std::string& body);

}  // namespace scenechain
