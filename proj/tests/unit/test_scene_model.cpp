#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "builders.hpp"
#include "error_check.hpp"
#include "oracles.hpp"
#include "scenechain/agent_protocol.hpp"
#include "scenechain/assets.hpp"
#include "scenechain/rng.hpp"
#include "scenechain/transition.hpp"

using namespace scenechain;
using testing_support::box;
using testing_support::rect_scene;

namespace {

const AssetCatalog& catalog() {
  static const AssetCatalog c = AssetCatalog::builtin();
  return c;
}

constexpr const char* kBedroomJson = R"({
  "bounds_top": [[0, 3, 0], [4, 3, 0], [4, 3, 4], [0, 3, 4]],
  "bounds_bottom": [[0, 0, 0], [4, 0, 0], [4, 0, 4], [0, 0, 4]],
  "room_type": "bedroom",
  "room_id": "bedroom_01",
  "objects": []
})";

ToolCall call(std::string id, ToolPayload p) { return ToolCall{std::move(id), std::move(p)}; }

AddObject add(std::string desc, Vec3 pos, Vec3 size, double yaw = 0.0) {
  AddObject a;
  a.object_description = std::move(desc);
  a.position = pos;
  a.size = size;
  a.rotation = yaw_quaternion(yaw);
  return a;
}

Scene random_scene(Rng& rng) {
  Scene s = rect_scene(rng.uniform(3.0, 6.0), rng.uniform(3.0, 5.0));
  const int n = static_cast<int>(rng.uniform_int(0, 6));
  for (int i = 0; i < n; ++i) {
    const Vec3 size{rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)};
    s.objects.push_back(box("obj_" + std::to_string(i), "object " + std::to_string(i),
                            {rng.uniform(0.0, 4.0), 0.5 * size.y, rng.uniform(0.0, 4.0)}, size,
                            rng.uniform(-std::numbers::pi, std::numbers::pi)));
  }
  // The wire format carries 6 decimals.
  for (auto& o : s.objects) {
    o.position = quantize6(o.position);
    o.size = quantize6(o.size);
    o.rotation = quantize6(o.rotation);
  }
  return s;
}

}  // namespace

TEST_SUITE("scene_model") {
  TEST_CASE("parse a rectangular bedroom") {
    const Scene s = parse_scene_json(kBedroomJson);
    CHECK(s.room.room_type == "bedroom");
    CHECK(s.objects.empty());
    CHECK(s.room.ceiling_height() == doctest::Approx(3.0));
  }

  TEST_CASE("empty object is missing bounds_top") {
    try {
      parse_scene_json("{}");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingField);
      CHECK(e.detail() == "bounds_top");
    }
  }

  TEST_CASE("malformed text") { CHECK_ERROR_CODE(parse_scene_json("{\"bounds_top\": ["), ErrorCode::MalformedJson); }

  TEST_CASE("triangle room with one object parses and round-trips") {
    Scene s;
    s.room = make_polygon_room({{0, 0}, {4, 0}, {0, 4}}, 2.8, "bedroom", "tri");
    s.objects.push_back(box("lamp_1", "lamp", {1.0, 0.25, 1.0}, {0.3, 0.5, 0.3}));
    const Scene back = parse_scene_json(serialize_scene(s));
    CHECK(back.objects.size() == 1);
    CHECK(back == s);
  }

  TEST_CASE("empty room serializes an empty object list") {
    const std::string text = serialize_scene(rect_scene(4, 4));
    CHECK(text.find("\"objects\": []") != std::string::npos);
  }

  TEST_CASE("two-object round trip and byte determinism") {
    Scene s = rect_scene(4, 4);
    s.objects.push_back(box("bed_1", "double bed", {2.0, 0.25, 1.0}, {2.0, 0.5, 1.6}));
    s.objects.push_back(box("lamp_1", "lamp", {0.5, 0.25, 0.5}, {0.3, 0.5, 0.3}, std::numbers::pi / 2));
    s.objects[1].rotation = quantize6(s.objects[1].rotation);
    const std::string a = serialize_scene(s);
    const std::string b = serialize_scene(s);
    CHECK(a == b);
    CHECK(parse_scene_json(a) == s);
  }

  TEST_CASE("wire keys are exact") {
    Scene s = rect_scene(4, 4);
    s.objects.push_back(box("bed_1", "double bed", {2.0, 0.25, 1.0}, {2.0, 0.5, 1.6}));
    const Json j = scene_to_json(s);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"bounds_top", "bounds_bottom", "room_type", "room_id", "objects"});
    std::vector<std::string> okeys;
    for (const auto& [k, v] : j["objects"][0].items()) okeys.push_back(k);
    CHECK(okeys == std::vector<std::string>{"uid", "description", "position", "rotation", "size"});
  }

  TEST_CASE("jid is accepted as a uid alias") {
    Json j = Json::parse(kBedroomJson);
    j["objects"] = Json::array({Json{{"jid", "bed_1"},
                                     {"description", "double bed"},
                                     {"position", {2.0, 0.25, 2.0}},
                                     {"rotation", {0, 0, 0, 1}},
                                     {"size", {2.0, 0.5, 1.6}}}});
    const Scene s = scene_from_json(j);
    REQUIRE(s.objects.size() == 1);
    CHECK(s.objects[0].uid == "bed_1");
  }

  TEST_CASE("non-yaw rotation is projected with a warning") {
    Json j = Json::parse(kBedroomJson);
    const double h = std::sqrt(0.5);
    j["objects"] = Json::array({Json{{"uid", "bed_1"},
                                     {"description", "double bed"},
                                     {"position", {2.0, 0.25, 2.0}},
                                     {"rotation", {h, 0, 0, h}},
                                     {"size", {2.0, 0.5, 1.6}}}});
    std::vector<std::string> warnings;
    const Scene s = scene_from_json(j, &warnings);
    CHECK_FALSE(warnings.empty());
    CHECK(is_yaw_quaternion(s.objects[0].rotation));
  }

  TEST_CASE("duplicate uids are rejected") {
    Scene s = rect_scene(4, 4);
    s.objects.push_back(box("a", "box", {1, 0.5, 1}, {1, 1, 1}));
    s.objects.push_back(box("a", "box", {3, 0.5, 3}, {1, 1, 1}));
    CHECK_ERROR_CODE(validate_scene(s), ErrorCode::InvariantViolation);
  }

  TEST_CASE("quaternion angle conventions") {
    CHECK(quaternion_yaw(yaw_quaternion(std::numbers::pi / 2)) == doctest::Approx(std::numbers::pi / 2));
    CHECK(quaternion_yaw(yaw_quaternion(std::numbers::pi)) == doctest::Approx(-std::numbers::pi));
    CHECK(normalize_angle(3 * std::numbers::pi) == doctest::Approx(-std::numbers::pi));
  }

  TEST_CASE("room area") {
    CHECK(room_area(make_rect_room(4, 4, 3, "bedroom", "r")) == doctest::Approx(16.0).epsilon(1e-12));
    const RoomGeometry l = make_polygon_room(testing_support::l_footprint(), 3, "bedroom", "l");
    CHECK(room_area(l) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(oracle::grid_area(l.footprint(), 0.01) == doctest::Approx(12.0).epsilon(1e-9));
    RoomGeometry flat;
    flat.room_type = "bedroom";
    for (const Vec2 p : {Vec2{0, 0}, Vec2{1, 1}, Vec2{2, 2}}) {
      flat.bounds_bottom.push_back({p.x, 0, p.z});
      flat.bounds_top.push_back({p.x, 3, p.z});
    }
    CHECK_ERROR_CODE(room_area(flat), ErrorCode::DegeneratePolygon);
  }

  TEST_CASE("self-intersecting footprint is degenerate") {
    const RoomGeometry bow = make_polygon_room({{0, 0}, {2, 2}, {2, 0}, {0, 2}}, 3, "bedroom", "bow");
    CHECK_ERROR_CODE(room_area(bow), ErrorCode::DegeneratePolygon);
  }

  TEST_CASE("agent response: valid edit") {
    const std::string text =
        R"(<think>room is empty</think><tool_calls>[{"id":"c1","name":"add_object","arguments":{"object_description":"double bed","position":[2,0.25,2],"rotation":[0,0,0,1],"size":[2.0,0.5,1.6]}}]</tool_calls>)";
    const ParsedResponse r = parse_agent_response(text, Phase::Edit);
    CHECK(r.penalties.empty());
    REQUIRE(r.response.tool_calls.size() == 1);
    CHECK(r.response.tool_calls[0].name() == "add_object");
    CHECK(r.response.think == std::optional<std::string>("room is empty"));
  }

  TEST_CASE("agent response: tag order penalty") {
    const std::string text = R"(<tool_calls>[{"id":"c1","name":"terminate","arguments":{"reason":"done"}}]</tool_calls><think>x</think>)";
    const ParsedResponse r = parse_agent_response(text, Phase::Edit);
    REQUIRE(r.penalties.size() == 1);
    CHECK(r.penalties[0].kind == PenaltyKind::TagOrder);
    CHECK(r.penalties[0].weight() == 0.8);
  }

  TEST_CASE("agent response: broken json") {
    const ParsedResponse r = parse_agent_response("<tool_calls>[{not json</tool_calls>", Phase::Edit);
    bool saw_json = false;
    for (const auto& p : r.penalties) saw_json |= p.kind == PenaltyKind::JsonParse && p.weight() == 0.9;
    CHECK(saw_json);
    CHECK(r.response.tool_calls.empty());
  }

  TEST_CASE("agent response: incomplete arguments") {
    const ParsedResponse r =
        parse_agent_response(R"(<think>x</think><tool_calls>[{"id":"c1","name":"move_object","arguments":{}}]</tool_calls>)",
                             Phase::Edit);
    REQUIRE(r.penalties.size() == 1);
    CHECK(r.penalties[0].kind == PenaltyKind::MissingParams);
    CHECK(r.penalties[0].weight() == 0.1);
  }

  TEST_CASE("agent response: init phase scene") {
    const std::string text = format_init_response(parse_scene_json(kBedroomJson));
    const ParsedResponse r = parse_agent_response(text, Phase::Init);
    CHECK(r.penalties.empty());
    REQUIRE(r.response.create_scene.has_value());
    CHECK(r.response.tool_calls.empty());
    CHECK(r.response.create_scene->room.room_type == "bedroom");
  }

  TEST_CASE("edit response round trip through the formatter") {
    const std::vector<ToolCall> calls{call("c1", add("lamp", {1, 0.25, 1}, {0.3, 0.5, 0.3})),
                                      call("c2", Terminate{"done"})};
    const ParsedResponse r = parse_agent_response(format_edit_response("why", calls), Phase::Edit);
    CHECK(r.penalties.empty());
    CHECK(r.response.tool_calls == calls);
  }

  TEST_CASE("penalty constants") {
    CHECK(penalty_weight(PenaltyKind::MissingParams) == 0.1);
    CHECK(penalty_weight(PenaltyKind::InvalidId) == 0.2);
    CHECK(penalty_weight(PenaltyKind::TagOrder) == 0.8);
    CHECK(penalty_weight(PenaltyKind::JsonParse) == 0.9);
  }

  TEST_CASE("add a double bed to an empty room") {
    const Scene s = rect_scene(4, 4);
    const TransitionResult r = apply_tool_call(s, call("c1", add("double bed", {2, 0.25, 2}, {2.0, 0.5, 1.6})), catalog());
    CHECK(r.penalties.empty());
    REQUIRE(r.scene.objects.size() == 1);
    CHECK(r.scene.objects[0].uid == "double_bed_1");
    CHECK(r.scene.objects[0].size == Vec3{2.0, 0.5, 1.6});
    CHECK(r.affected_uid == std::optional<std::string>("double_bed_1"));
  }

  TEST_CASE("remove an existing object") {
    Scene s = rect_scene(4, 4);
    s.objects.push_back(box("bed_1", "double bed", {2, 0.25, 2}, {2.0, 0.5, 1.6}));
    const TransitionResult r = apply_tool_call(s, call("c1", RemoveObject{"bed_1"}), catalog());
    CHECK(r.scene.objects.empty());
    CHECK(r.penalties.empty());
  }

  TEST_CASE("move of an unknown uid") {
    Scene s = rect_scene(4, 4);
    s.objects.push_back(box("bed_1", "double bed", {2, 0.25, 2}, {2.0, 0.5, 1.6}));
    const TransitionResult r = apply_tool_call(s, call("c1", MoveObject{"ghost", {1, 0, 1}}), catalog());
    CHECK(r.scene == s);
    REQUIRE(r.penalties.size() == 1);
    CHECK(r.penalties[0].kind == PenaltyKind::InvalidId);
  }

  TEST_CASE("retrieval fixes the proportions, the request fixes the scale") {
    const Scene s = rect_scene(5, 5);
    // Cube-shaped request for a bed: proportions come from the catalog, volume from the request.
    const TransitionResult r = apply_tool_call(s, call("c1", add("double bed", {2, 0.5, 2}, {1, 1, 1})), catalog());
    REQUIRE(r.scene.objects.size() == 1);
    const Vec3 got = r.scene.objects[0].size;
    CHECK(got.x * got.y * got.z == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(got.x / got.z == doctest::Approx(2.0 / 1.6).epsilon(1e-4));
  }

  TEST_CASE("properties: round trip, purity, uid uniqueness, terminate identity") {
    Rng rng(20240611);
    const std::vector<std::string> descs{"double bed", "lamp", "sofa", "rug", "nightstand", "mystery object"};
    for (int trial = 0; trial < 200; ++trial) {
      Scene s = random_scene(rng);
      CHECK(parse_scene_json(serialize_scene(s)) == s);

      for (int step = 0; step < 8; ++step) {
        ToolCall c;
        const auto pick = rng.uniform_int(0, 5);
        const std::string target = s.objects.empty()
                                       ? std::string("none")
                                       : s.objects[static_cast<std::size_t>(rng.uniform_int(
                                                       0, static_cast<std::int64_t>(s.objects.size()) - 1))]
                                             .uid;
        switch (pick) {
          case 0:
            c = call("a", add(descs[static_cast<std::size_t>(rng.uniform_int(0, 5))],
                              {rng.uniform(0, 4), 0.5, rng.uniform(0, 4)},
                              {rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(0.2, 2)}, rng.uniform(-3, 3)));
            break;
          case 1: c = call("r", RemoveObject{target}); break;
          case 2: c = call("m", MoveObject{target, {rng.uniform(0, 4), 0.5, rng.uniform(0, 4)}}); break;
          case 3: c = call("o", RotateObject{target, yaw_quaternion(rng.uniform(-3, 3))}); break;
          case 4: c = call("s", ScaleObject{target, {rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(0.2, 2)}}); break;
          default: c = call("p", ReplaceObject{target, descs[static_cast<std::size_t>(rng.uniform_int(0, 5))]}); break;
        }
        const Scene before = s;
        const TransitionResult r1 = apply_tool_call(s, c, catalog());
        const TransitionResult r2 = apply_tool_call(s, c, catalog());
        CHECK(s == before);
        CHECK(r1.scene == r2.scene);
        CHECK(r1.penalties == r2.penalties);
        std::set<std::string> uids;
        for (const auto& o : r1.scene.objects) uids.insert(o.uid);
        CHECK(uids.size() == r1.scene.objects.size());
        for (const auto& p : r1.penalties) {
          const double w = p.weight();
          CHECK((w == 0.1 || w == 0.2 || w == 0.8 || w == 0.9));
        }
        CHECK(apply_tool_call(r1.scene, call("t", Terminate{"done"}), catalog()).scene == r1.scene);
        CHECK(parse_scene_json(serialize_scene(r1.scene)) == r1.scene);
        s = r1.scene;
      }
    }
  }
}
