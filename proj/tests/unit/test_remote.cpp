#include <doctest.h>

#include <atomic>
#include <httplib.h>
#include <thread>

#include "error_check.hpp"
#include "scenechain/env.hpp"
#include "scenechain/episode_io.hpp"
#include "scenechain/remote.hpp"

using namespace scenechain;

namespace {

const AssetCatalog& catalog() {
  static const AssetCatalog c = AssetCatalog::builtin();
  return c;
}

// httplib server on an ephemeral loopback port, stopped on destruction.
class Loopback {
 public:
  Loopback() = default;
  httplib::Server& server() { return server_; }
  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Loopback() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }
  HttpEndpoint endpoint() const { return HttpEndpoint::parse("http://127.0.0.1:" + std::to_string(port_)); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

void reply(httplib::Response& res, const Json& j) { res.set_content(j.dump(), "application/json"); }

Observation observation_from_json(const Json& j) {
  Observation obs;
  obs.instruction = j.at("instruction").get<std::string>();
  obs.scene_json = j.at("scene_json").get<std::string>();
  obs.turn = j.at("turn").get<int>();
  obs.phase = obs_phase_from_name(j.at("phase").get<std::string>());
  for (const auto& h : j.at("history")) obs.history.push_back({h.at("turn"), h.at("summary"), h.at("r_t")});
  return obs;
}

JudgeContext context_from_json(const Json& j) {
  JudgeContext ctx;
  ctx.instruction = j.at("instruction").get<std::string>();
  ctx.room_type = j.at("room_type").get<std::string>();
  if (j.contains("mandatory_objects")) ctx.mandatory = j.at("mandatory_objects").get<std::vector<std::string>>();
  return ctx;
}

// Serves the greedy policy and the mock judge over HTTP.
void install_mock_routes(httplib::Server& svr, GreedyBuilderPolicy& policy, MockJudge& judge, std::vector<std::string>& mandatory) {
  svr.Post("/act", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, Json{{"text", policy.act(observation_from_json(Json::parse(req.body)))}});
  });
  svr.Post("/mandatory", [&](const httplib::Request& req, httplib::Response& res) {
    const Json j = Json::parse(req.body);
    const MandatoryObjects m = judge.mandatory(j.at("instruction"), j.at("room_type"));
    mandatory = m.items;
    reply(res, Json{{"mandatory_objects", m.items}});
  });
  svr.Post("/improve", [&](const httplib::Request& req, httplib::Response& res) {
    const Json j = Json::parse(req.body);
    // Fenced replies must be accepted.
    res.set_content("```json\n" + std::to_string(judge.improvement(scene_from_json(j.at("before")), scene_from_json(j.at("after")),
                                                                    context_from_json(j))) +
                        "\n```",
                    "text/plain");
  });
  svr.Post("/relevance", [&](const httplib::Request& req, httplib::Response& res) {
    const Json j = Json::parse(req.body);
    JudgeContext ctx = context_from_json(j);
    ctx.mandatory = mandatory;
    const RelevanceVerdict v = judge.relevance(j.at("new_objects").get<std::vector<std::string>>(), ctx);
    reply(res, Json{{"relevant_objects", v.relevant}, {"irrelevant_objects", v.irrelevant}});
  });
  svr.Post("/consolidate", [&](const httplib::Request& req, httplib::Response& res) {
    const Json j = Json::parse(req.body);
    JudgeContext ctx = context_from_json(j);
    ctx.mandatory = mandatory;
    const ConsolidatedScores c = judge.consolidated(scene_from_json(j.at("scene")), ctx);
    reply(res, Json{{"rationality", c.rationality}, {"requirement_match", c.requirement_match}, {"scene_graph", c.scene_graph}});
  });
}

}  // namespace

TEST_SUITE("remote") {
  TEST_CASE("endpoint parsing") {
    const HttpEndpoint e = HttpEndpoint::parse("http://127.0.0.1:8080/v1/");
    CHECK(e.scheme_host_port == "http://127.0.0.1:8080");
    CHECK(e.base_path == "/v1");
    CHECK(HttpEndpoint::parse("http://localhost").base_path.empty());
  }

  TEST_CASE("reply validation") {
    CHECK(parse_improvement_reply("1") == 1);
    CHECK(parse_improvement_reply("{\"improvement\": -1}") == -1);
    CHECK(parse_improvement_reply("```json\n0\n```") == 0);
    CHECK_ERROR_CODE(parse_improvement_reply("2"), ErrorCode::NonConformingResponse);
    CHECK_ERROR_CODE(parse_improvement_reply("0.5"), ErrorCode::NonConformingResponse);
    CHECK_ERROR_CODE(parse_improvement_reply("improved"), ErrorCode::NonConformingResponse);

    const std::string ok = R"({"rationality": 0.5, "requirement_match": -1.0, "scene_graph": 1})";
    const ConsolidatedScores c = parse_consolidated_reply(ok);
    CHECK(c.rationality == 0.5);
    CHECK(c.requirement_match == -1.0);
    CHECK_ERROR_CODE(parse_consolidated_reply(R"({"rationality": 0.25, "requirement_match": 0, "scene_graph": 0})"),
                     ErrorCode::NonConformingResponse);
    CHECK_ERROR_CODE(parse_consolidated_reply(R"({"rationality": 0.5})"), ErrorCode::NonConformingResponse);

    CHECK(parse_mandatory_reply(R"({"mandatory_objects": ["a","b","c","d","e"]})").size() == 5);
    CHECK_ERROR_CODE(parse_mandatory_reply(R"({"mandatory_objects": ["a","b"]})"), ErrorCode::NonConformingResponse);
    const RelevanceVerdict v = parse_relevance_reply(R"({"relevant_objects": ["bed"], "irrelevant_objects": []})");
    CHECK(v.relevant == std::vector<std::string>{"bed"});

    try {
      parse_improvement_reply("nonsense body");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("nonsense body") != std::string::npos);
    }
  }

  TEST_CASE("remote policy and judge match the in-process episode") {
    GreedyBuilderPolicy served_policy(catalog());
    MockJudge served_judge(catalog());
    std::vector<std::string> mandatory;
    Loopback lb;
    install_mock_routes(lb.server(), served_policy, served_judge, mandatory);
    lb.start();

    HttpPolicy policy(lb.endpoint());
    HttpJudge judge(lb.endpoint(), catalog());
    const EpisodeRecord remote = run_episode(policy, judge, "a bedroom for two", std::nullopt, EpisodeConfig{}, 4, catalog());

    GreedyBuilderPolicy local_policy(catalog());
    MockJudge local_judge(catalog());
    const EpisodeRecord local =
        run_episode(local_policy, local_judge, "a bedroom for two", std::nullopt, EpisodeConfig{}, 4, catalog());
    CHECK(write_json(episode_summary_to_json(remote), FloatFormat::RoundTrip) ==
          write_json(episode_summary_to_json(local), FloatFormat::RoundTrip));
    REQUIRE(remote.turns.size() == local.turns.size());
    for (std::size_t i = 0; i < local.turns.size(); ++i) CHECK(remote.turns[i].raw_text == local.turns[i].raw_text);
  }

  TEST_CASE("non-conforming judge replies abort") {
    Loopback lb;
    lb.server().Post("/improve", [](const httplib::Request&, httplib::Response& res) { res.set_content("2", "text/plain"); });
    lb.server().Post("/consolidate", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"rationality": 0.25, "requirement_match": 0, "scene_graph": 0})", "application/json");
    });
    lb.start();
    HttpJudge judge(lb.endpoint(), catalog());
    const Scene s;
    const JudgeContext ctx{"x", "bedroom", {}};
    CHECK_ERROR_CODE(judge.improvement(s, s, ctx), ErrorCode::NonConformingResponse);
    CHECK_ERROR_CODE(judge.consolidated(s, ctx), ErrorCode::NonConformingResponse);
  }

  TEST_CASE("one retry after a server error") {
    std::atomic<int> hits{0};
    Loopback lb;
    lb.server().Post("/act", [&](const httplib::Request&, httplib::Response& res) {
      if (hits++ == 0) {
        res.status = 503;
        return;
      }
      reply(res, Json{{"text", "<think>a</think><tool_calls>[]</tool_calls>"}});
    });
    lb.start();
    HttpPolicy policy(lb.endpoint());
    Observation obs;
    CHECK(policy.act(obs) == "<think>a</think><tool_calls>[]</tool_calls>");
    CHECK(hits == 2);
  }

  TEST_CASE("persistent failures surface as transport errors") {
    std::atomic<int> hits{0};
    Loopback lb;
    lb.server().Post("/act", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 500;
      res.set_content("backend exploded", "text/plain");
    });
    lb.start();
    HttpPolicy policy(lb.endpoint());
    try {
      policy.act(Observation{});
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PolicyTransport);
      CHECK(std::string(e.what()).find("backend exploded") != std::string::npos);
    }
    CHECK(hits == 2);

    HttpOptions quick;
    quick.timeout_seconds = 1.0;
    HttpJudge judge(HttpEndpoint::parse("http://127.0.0.1:1"), catalog(), quick);
    CHECK_ERROR_CODE(judge.mandatory("a bedroom", "bedroom"), ErrorCode::JudgeTransport);
  }
}
