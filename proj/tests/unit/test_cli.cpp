#include <doctest.h>

#include <sstream>

#include "builders.hpp"
#include "cli.hpp"
#include "scenechain/canonical_json.hpp"
#include "temp_dir.hpp"

using namespace scenechain;
using testing_support::cube;
using testing_support::rect_scene;
using testing_support::TempDir;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "scenechain");
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void write_scene(const std::filesystem::path& p, const Scene& s) { write_text_file_atomic(p, serialize_scene(s)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"metrics"}).code == 2);
    CHECK(cli({"metrics", "--scenes", "/definitely/not/here"}).code == 2);

    TempDir tmp("cli_usage");
    write_scene(tmp / "s.json", rect_scene(4, 4));
    const CliRun bad_ext = cli({"render", "--in", (tmp / "s.json").string(), "--out", (tmp / "s.txt").string()});
    CHECK(bad_ext.code == 2);
    const CliRun json_err = cli({"--json", "run-episode", "--policy", "telepathy", "--prompt", "x", "--out", (tmp / "e").string()});
    CHECK(json_err.code == 2);
    const Json e = Json::parse(json_err.err);
    CHECK(e["error"] == "UsageError");
  }

  TEST_CASE("domain errors exit with 1") {
    TempDir tmp("cli_domain");
    std::filesystem::create_directories(tmp / "scenes");
    write_text_file_atomic(tmp / "scenes" / "broken.json", "{\"room\": ");
    const CliRun r = cli({"--json", "metrics", "--scenes", (tmp / "scenes").string()});
    CHECK(r.code == 1);
    const Json e = Json::parse(r.err);
    CHECK(e["error"] == "MalformedJson");
    CHECK(!e["message"].get<std::string>().empty());

    std::filesystem::create_directories(tmp / "empty");
    CHECK(cli({"metrics", "--scenes", (tmp / "empty").string()}).code == 1);
  }

  TEST_CASE("metrics over a scene directory") {
    TempDir tmp("cli_metrics");
    std::filesystem::create_directories(tmp / "scenes");
    Scene one = rect_scene(6, 6);
    one.objects = {cube("a", 6.0, 3), cube("b", 1, 1), cube("c", 3, 3), cube("d", 1, 5)};
    Scene two = rect_scene(6, 6);
    two.objects = {cube("a", 1, 1), cube("b", 3, 3)};
    write_scene(tmp / "scenes" / "one.json", one);
    write_scene(tmp / "scenes" / "two.json", two);

    const CliRun r = cli({"metrics", "--scenes", (tmp / "scenes").string(), "--out", (tmp / "m.json").string()});
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["scene_count"] == 2);
    CHECK(j["obr"].get<double>() == 0.125);
    CHECK(j["cnr"].get<double>() == 0.0);
    CHECK(j.contains("vbl"));
    CHECK(j["per_scene"].size() == 2);
    CHECK(Json::parse(read_text_file(tmp / "m.json")) == j);
    CHECK(std::filesystem::exists(tmp / "m.json.manifest.json"));
    CHECK(cli({"--pretty", "metrics", "--scenes", (tmp / "scenes").string()}).out.find("OBR 0.1250") != std::string::npos);
  }

  TEST_CASE("fixtures, chains and verification") {
    TempDir tmp("cli_pipeline");
    const std::string fx = (tmp / "fx").string();
    const CliRun made = cli({"make-fixtures", "--out", fx, "--count", "3", "--seed", "5"});
    REQUIRE(made.code == 0);
    CHECK(made.json()["scenes"] == 3);
    CHECK(made.json()["files"] == 12);

    const std::string ds = (tmp / "ds").string();
    const CliRun synth = cli({"-j", "2", "synth-chains", "--scenes", fx + "/clean", "--out", ds, "--candidates", "3", "--keep", "2"});
    REQUIRE(synth.code == 0);
    CHECK(synth.json()["chains"] == 6);

    const CliRun verify = cli({"verify-chains", ds});
    REQUIRE(verify.code == 0);
    CHECK(verify.json()["passed"] == 6);
    CHECK(verify.json()["failed"] == 0);

    const CliRun opt = cli({"optimize", "--in", fx + "/chaotic/fixture_000.json", "--out", (tmp / "opt.json").string(),
                            "--report", (tmp / "report.json").string()});
    CHECK(opt.code == 0);
    CHECK(opt.json()["residual_violations"].get<int>() >= 0);

    const CliRun svg = cli({"render", "--in", fx + "/clean/fixture_000.json", "--out", (tmp / "r.svg").string()});
    CHECK(svg.code == 0);
    CHECK(read_text_file(tmp / "r.svg").rfind("<svg", 0) == 0);
    const CliRun png = cli({"render", "--merged", "--in", fx + "/clean/fixture_000.json", "--out", (tmp / "r.png").string()});
    CHECK(png.code == 0);
    CHECK(read_text_file(tmp / "r.png").substr(1, 3) == "PNG");
  }

  TEST_CASE("episodes record and rescore") {
    TempDir tmp("cli_episode");
    const std::string dir = (tmp / "ep").string();
    const CliRun run = cli({"run-episode", "--prompt", "a cozy bedroom with a reading corner", "--seed", "3", "--out", dir});
    REQUIRE(run.code == 0);
    CHECK(run.json()["turns"].get<int>() >= 2);
    CHECK(std::filesystem::exists(tmp / "ep" / "episode.jsonl"));
    CHECK(std::filesystem::exists(tmp / "ep" / "summary.json"));
    const CliRun score = cli({"score-episode", dir});
    CHECK(score.code == 0);
    CHECK(score.json()["matches"] == true);
    CHECK(score.json()["stored_j_tau"] == score.json()["recomputed_j_tau"]);
  }
}
