#include <doctest.h>

#include <algorithm>
#include <set>

#include "error_check.hpp"
#include "scenechain/fixtures.hpp"
#include "scenechain/metrics.hpp"

using namespace scenechain;

namespace {

const AssetCatalog& catalog() {
  static const AssetCatalog c = AssetCatalog::builtin();
  return c;
}

std::set<std::string> uids_of(const Scene& s) {
  std::set<std::string> out;
  for (const auto& o : s.objects) out.insert(o.uid);
  return out;
}

}  // namespace

TEST_SUITE("fixtures") {
  TEST_CASE("fixture scenes are clean, sized and furnished") {
    const auto rooms = fixture_room_types(catalog());
    CHECK(rooms.size() == catalog().mandatory_by_room().size());
    for (const auto& room : rooms) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CAPTURE(room);
        CAPTURE(seed);
        const Scene s = make_fixture_scene(room, seed, catalog());
        CHECK_NOTHROW(validate_scene(s));
        CHECK(s.room.room_type == room);
        CHECK(s.objects.size() >= 8);
        CHECK(s.objects.size() <= 12);
        CHECK(check_physics(s).clean());
        CHECK(uids_of(s).size() == s.objects.size());
        std::set<std::string> present;
        for (const auto& o : s.objects) present.insert(catalog().category_of(o.description));
        if (const auto essential = catalog().essential_for(room)) CHECK(present.count(*essential) == 1);
      }
    }
  }

  TEST_CASE("fixtures are deterministic per seed") {
    const Scene a = make_fixture_scene("bedroom", 7, catalog());
    const Scene b = make_fixture_scene("bedroom", 7, catalog());
    CHECK(serialize_scene(a) == serialize_scene(b));
    const auto set1 = make_fixture_set(6, 3, catalog());
    const auto set2 = make_fixture_set(6, 3, catalog());
    REQUIRE(set1.size() == 6);
    CHECK(set1[0].id == "fixture_000");
    CHECK(set1[5].id == "fixture_005");
    for (std::size_t i = 0; i < set1.size(); ++i) CHECK(serialize_scene(set1[i].scene) == serialize_scene(set2[i].scene));
  }

  TEST_CASE("impossible recipes are rejected") {
    CHECK_ERROR_CODE(make_fixture_scene("spaceship", 0, catalog()), ErrorCode::UnknownRoomType);
    FixtureOptions crowded;
    crowded.min_objects = 200;
    crowded.max_objects = 200;
    CHECK_ERROR_CODE(make_fixture_scene("bathroom", 0, catalog(), crowded), ErrorCode::SceneRejected);
  }

  TEST_CASE("goal scenes") {
    const Scene clean = normalize_scene(make_fixture_scene("living room", 11, catalog()), catalog());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Scene missing = make_goal_scene(clean, GoalVariant::Missing, seed, catalog());
      CHECK(missing.objects.size() < clean.objects.size());
      const auto kept = uids_of(missing);
      const auto all = uids_of(clean);
      CHECK(std::includes(all.begin(), all.end(), kept.begin(), kept.end()));

      const Scene chaotic = make_goal_scene(clean, GoalVariant::Chaotic, seed, catalog());
      CHECK(uids_of(chaotic) == all);
      CHECK(serialize_scene(chaotic) != serialize_scene(clean));
      CHECK(serialize_scene(chaotic) == serialize_scene(make_goal_scene(clean, GoalVariant::Chaotic, seed, catalog())));
    }
    for (auto v : {GoalVariant::Chaotic, GoalVariant::Missing, GoalVariant::ChaoticMissing}) {
      CHECK(goal_variant_from_name(goal_variant_name(v)) == v);
    }
  }

  TEST_CASE("jitter moves objects in the floor plane only") {
    const Scene clean = make_fixture_scene("office", 2, catalog());
    Rng rng(5);
    const Scene j = jitter_scene(clean, rng, 4, 0.3);
    REQUIRE(j.objects.size() == clean.objects.size());
    int moved = 0;
    for (std::size_t i = 0; i < j.objects.size(); ++i) {
      const auto& a = clean.objects[i];
      const auto& b = j.objects[i];
      CHECK(a.uid == b.uid);
      CHECK(a.position.y == b.position.y);
      CHECK(std::abs(a.position.x - b.position.x) <= 4 * 0.3 + 1e-9);
      CHECK(std::abs(a.position.z - b.position.z) <= 4 * 0.3 + 1e-9);
      moved += a.position.x != b.position.x || a.position.z != b.position.z;
    }
    CHECK(moved >= 1);
    CHECK(moved <= 4);
    Rng r0(0);
    CHECK(jitter_scene(Scene{}, r0, 3, 1.0).objects.empty());
  }
}
