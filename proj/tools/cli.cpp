#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "scenechain/chain_io.hpp"
#include "scenechain/chain_synth.hpp"
#include "scenechain/env.hpp"
#include "scenechain/episode_io.hpp"
#include "scenechain/error.hpp"
#include "scenechain/fixtures.hpp"
#include "scenechain/judge.hpp"
#include "scenechain/metrics.hpp"
#include "scenechain/parallel.hpp"
#include "scenechain/phys_opt.hpp"
#include "scenechain/policy.hpp"
#include "scenechain/remote.hpp"
#include "scenechain/render.hpp"

#ifndef SCENECHAIN_VERSION
#define SCENECHAIN_VERSION "0.0.0"
#endif

namespace scenechain {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string catalog_path;
  std::string config_path;
  bool json_errors = false;
  bool pretty = false;
  std::size_t jobs = 1;
};

using Clock = std::chrono::steady_clock;

AssetCatalog load_catalog(const Common& c) {
  if (!c.catalog_path.empty()) return AssetCatalog::load(c.catalog_path);
  if (const char* env = std::getenv("SCENECHAIN_CATALOG"); env && *env) return AssetCatalog::load(env);
  return AssetCatalog::builtin();
}

std::string catalog_source(const Common& c) {
  if (!c.catalog_path.empty()) return c.catalog_path;
  if (const char* env = std::getenv("SCENECHAIN_CATALOG"); env && *env) return env;
  return "builtin";
}

Json load_config_section(const Common& c, const char* section) {
  if (c.config_path.empty()) return Json::object();
  Json j;
  try {
    j = Json::parse(read_text_file(c.config_path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, c.config_path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, c.config_path + ": config must be a JSON object");
  return j.contains(section) ? j.at(section) : Json::object();
}

Scene load_scene_file(const std::string& path) { return parse_scene_json(read_text_file(path)); }

void write_manifest(const fs::path& path, const std::string& command, const Common& common, Json config,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, Clock::time_point start) {
  Json m = Json::object();
  m["command"] = command;
  m["tool_version"] = SCENECHAIN_VERSION;
  m["catalog"] = catalog_source(common);
  m["config"] = std::move(config);
  m["seed"] = seed ? Json(std::to_string(*seed)) : Json(nullptr);
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  m["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  write_text_file_atomic(path, write_json(m, FloatFormat::RoundTrip) + "\n");
}

void print_json(std::ostream& out, const Json& j) { out << write_json(j, FloatFormat::RoundTrip) << "\n"; }

std::string http_url(const std::string& spec) {
  // Accepts both http:URL and a bare http:// URL.
  if (spec.rfind("http://", 0) == 0) return spec;
  return spec.substr(5);
}

std::unique_ptr<Judge> make_judge(const std::string& spec, const AssetCatalog& catalog, const PhysicsConfig& physics) {
  if (spec == "mock") return std::make_unique<MockJudge>(catalog, physics);
  if (spec.rfind("http:", 0) == 0) return std::make_unique<HttpJudge>(HttpEndpoint::parse(http_url(spec)), catalog);
  throw UsageError("--judge must be 'mock' or 'http:URL'");
}

// ---------------------------------------------------------------- synth-chains

struct SynthArgs {
  std::string scenes_dir;
  std::string out_dir;
  std::uint64_t seed = 0;
  int candidates = 10;
  int keep = 3;
  std::string judge = "mock";
};

int cmd_synth(const SynthArgs& a, const CLI::App& sub, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const AssetCatalog catalog = load_catalog(common);
  ChainConfig cfg = ChainConfig::from_json(load_config_section(common, "chain"));
  if (sub.count("--seed") || !cfg.seed) cfg.seed = a.seed;
  cfg.validate();
  SynthOptions opts;
  opts.n_candidates = a.candidates;
  opts.keep = a.keep;
  opts.jobs = common.jobs;
  if (opts.n_candidates < 1 || opts.keep < 1) throw UsageError("--candidates and --keep must be positive");

  ChainJudgeFactory factory;
  if (a.judge == "mock") {
    factory = [&catalog] { return std::make_unique<MockChainJudge>(catalog); };
  } else if (a.judge.rfind("http:", 0) == 0) {
    const HttpEndpoint ep = HttpEndpoint::parse(http_url(a.judge));
    factory = [ep] { return std::make_unique<HttpChainJudge>(ep); };
  } else {
    throw UsageError("--judge must be 'mock' or 'http:URL'");
  }

  const std::vector<NamedScene> scenes = load_scene_dir(a.scenes_dir);
  const std::vector<SceneChains> dataset = synthesize_dataset(scenes, cfg, opts, factory, catalog);
  write_dataset(a.out_dir, dataset);

  std::size_t chains = 0;
  for (const auto& s : dataset) chains += s.kept.size();
  Json config = cfg.to_json();
  config["candidates"] = opts.n_candidates;
  config["keep"] = opts.keep;
  config["judge"] = a.judge;
  write_manifest(fs::path(a.out_dir) / "manifest.json", "synth-chains", common, config, cfg.seed, {a.scenes_dir},
                 {"index.jsonl"}, start);
  print_json(out, Json{{"scenes", dataset.size()}, {"chains", chains}, {"out", a.out_dir}});
  return 0;
}

// --------------------------------------------------------------- verify-chains

struct VerifyArgs {
  std::string dataset_dir;
};

int cmd_verify(const VerifyArgs& a, const Common& common, std::ostream& out) {
  const AssetCatalog catalog = load_catalog(common);
  const std::vector<DatasetEntry> entries = read_dataset_index(a.dataset_dir);
  std::vector<std::string> failures(entries.size());
  parallel_for(entries.size(), common.jobs, [&](std::size_t i) {
    try {
      const EditChain chain = read_chain_file(fs::path(a.dataset_dir) / entries[i].chain_path);
      if (!chain.turns.empty() && !chain.turns.front().scene_before.objects.empty()) {
        failures[i] = "first turn does not start from an empty room";
      } else if (!(replay(chain, catalog) == chain.final_scene)) {
        failures[i] = "replay does not reproduce the final scene";
      }
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  Json failed = Json::array();
  std::size_t passed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (failures[i].empty()) {
      ++passed;
    } else {
      failed.push_back(Json{{"chain_path", entries[i].chain_path}, {"reason", failures[i]}});
    }
  }
  if (common.pretty) {
    out << "chains  " << entries.size() << "\npassed  " << passed << "\nfailed  " << failed.size() << "\n";
    for (const auto& f : failed) out << "  " << f["chain_path"].get<std::string>() << ": " << f["reason"].get<std::string>() << "\n";
  } else {
    print_json(out, Json{{"total", entries.size()}, {"passed", passed}, {"failed", failed.size()}, {"failures", failed}});
  }
  return failed.empty() ? 0 : 1;
}

// ----------------------------------------------------------------- run-episode

struct EpisodeArgs {
  std::string policy = "greedy";
  std::string judge = "mock";
  std::string prompt;
  std::string init_path;
  std::string chain_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int max_turns = 0;
  bool render = false;
  bool no_opt = false;
  std::string room_type;
};

int cmd_episode(const EpisodeArgs& a, const CLI::App& sub, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const AssetCatalog catalog = load_catalog(common);
  EpisodeConfig cfg = EpisodeConfig::from_json(load_config_section(common, "episode"));
  std::optional<Scene> init;
  if (!a.init_path.empty()) init = load_scene_file(a.init_path);
  if (sub.count("--max-turns")) {
    cfg.max_turns = a.max_turns;
  } else if (init && !load_config_section(common, "episode").contains("max_turns")) {
    cfg.max_turns = 10;
  }
  if (sub.count("--render")) cfg.render_enabled = true;
  if (sub.count("--no-opt")) cfg.physics_opt_on_finish = false;
  if (!a.room_type.empty()) cfg.room_type = a.room_type;
  cfg.validate();

  std::string prompt = a.prompt;
  std::unique_ptr<Policy> policy;
  if (a.policy == "replay") {
    if (a.chain_path.empty()) throw UsageError("--policy replay needs --chain");
    EditChain chain = read_chain_file(a.chain_path);
    if (prompt.empty()) prompt = chain.instruction;
    policy = std::make_unique<ReplayPolicy>(std::move(chain));
  } else if (a.policy == "random") {
    policy = std::make_unique<RandomPolicy>(derive_seed(a.seed, "random_policy", 0), catalog);
  } else if (a.policy == "greedy") {
    policy = std::make_unique<GreedyBuilderPolicy>(catalog);
  } else if (a.policy.rfind("http:", 0) == 0) {
    policy = std::make_unique<HttpPolicy>(HttpEndpoint::parse(http_url(a.policy)));
  } else {
    throw UsageError("--policy must be replay, random, greedy or http:URL");
  }
  if (prompt.empty()) throw UsageError("--prompt is required");
  std::unique_ptr<Judge> judge = make_judge(a.judge, catalog, cfg.physics);

  const EpisodeRecord rec = run_episode(*policy, *judge, prompt, init, cfg, a.seed, catalog);
  const fs::path dir(a.out_dir);
  write_episode(dir, rec);
  write_text_file_atomic(dir / "final_scene.json", serialize_scene(rec.final_scene));
  Json config = cfg.to_json();
  config["policy"] = a.policy;
  config["judge"] = a.judge;
  config["prompt"] = prompt;
  std::vector<std::string> inputs;
  if (!a.init_path.empty()) inputs.push_back(a.init_path);
  if (!a.chain_path.empty()) inputs.push_back(a.chain_path);
  write_manifest(dir / "manifest.json", "run-episode", common, config, a.seed, inputs,
                 {"episode.jsonl", "summary.json", "final_scene.json"}, start);
  print_json(out, Json{{"turns", rec.turns.size()},
                       {"termination_cause", std::string(termination_cause_name(rec.cause))},
                       {"R_final", rec.final_reward.R_final},
                       {"j_tau", rec.score.j_tau},
                       {"out", a.out_dir}});
  return 0;
}

// --------------------------------------------------------------- score-episode

struct ScoreArgs {
  std::string record_dir;
};

int cmd_score(const ScoreArgs& a, const Common& common, std::ostream& out) {
  const AssetCatalog catalog = load_catalog(common);
  const EpisodeRecord rec = read_episode(a.record_dir);
  const RescoreResult r = rescore_episode(rec, catalog);
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(s.r_t);
  print_json(out, Json{{"stored_j_tau", rec.score.j_tau},
                       {"recomputed_j_tau", r.score.j_tau},
                       {"stored_R_final", rec.final_reward.R_final},
                       {"recomputed_R_final", r.final_reward.R_final},
                       {"step_rewards", steps},
                       {"matches", r.matches}});
  return r.matches ? 0 : 1;
}

// -------------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string in_path;
  std::string out_path;
  std::string report_path;
  std::uint64_t seed = 0;
  int max_steps = 5;
};

int cmd_optimize(const OptimizeArgs& a, const CLI::App& sub, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const Json section = load_config_section(common, "optimizer");
  OptConfig cfg;
  cfg.max_steps = section.value("max_steps", cfg.max_steps);
  cfg.oob_step = section.value("oob_step", cfg.oob_step);
  cfg.margin = section.value("margin", cfg.margin);
  if (sub.count("--max-steps")) cfg.max_steps = a.max_steps;
  if (cfg.max_steps < 0) throw UsageError("--max-steps must be non-negative");

  const Scene scene = load_scene_file(a.in_path);
  Rng rng(derive_seed(a.seed, "phys_opt", 0));
  const OptResult res = optimize(scene, cfg, rng);
  write_text_file_atomic(a.out_path, serialize_scene(res.scene));
  const Json report = opt_report_to_json(res.report);
  std::vector<std::string> outputs{a.out_path};
  if (!a.report_path.empty()) {
    write_text_file_atomic(a.report_path, write_json(report, FloatFormat::RoundTrip) + "\n");
    outputs.push_back(a.report_path);
  }
  const Json config{{"max_steps", cfg.max_steps}, {"oob_step", cfg.oob_step}, {"margin", cfg.margin}};
  write_manifest(a.out_path + ".manifest.json", "optimize", common, config, a.seed, {a.in_path}, outputs, start);
  print_json(out, Json{{"steps_run", res.report.steps_run},
                       {"moved", res.report.moved.size()},
                       {"deleted", res.report.deleted},
                       {"residual_violations", res.report.residual.violation_count()}});
  return 0;
}

// --------------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string scenes_dir;
  std::string out_path;
};

int cmd_metrics(const MetricsArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const std::vector<NamedScene> scenes = load_scene_dir(a.scenes_dir);
  std::vector<std::pair<ViolationReport, Scene>> reports(scenes.size());
  parallel_for(scenes.size(), common.jobs, [&](std::size_t i) {
    reports[i] = {check_physics(scenes[i].scene), scenes[i].scene};
  });
  const DatasetMetrics m = aggregate(reports);
  Json per = Json::array();
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    per.push_back(Json{{"id", scenes[i].id},
                       {"oob_fraction", m.per_scene[i].oob_fraction},
                       {"col_fraction", m.per_scene[i].col_fraction},
                       {"vbl", m.per_scene[i].vbl}});
  }
  const Json j{{"scene_count", m.scene_count}, {"obr", m.obr}, {"cnr", m.cnr}, {"vbl", m.vbl}, {"per_scene", per}};
  if (!a.out_path.empty()) {
    write_text_file_atomic(a.out_path, write_json(j, FloatFormat::RoundTrip) + "\n");
    write_manifest(a.out_path + ".manifest.json", "metrics", common, Json::object(), std::nullopt, {a.scenes_dir},
                   {a.out_path}, start);
  }
  if (common.pretty) {
    char line[160];
    out << "scene                    OOB      COL      VBL(L)\n";
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      std::snprintf(line, sizeof line, "%-24s %-8.4f %-8.4f %.3f\n", scenes[i].id.c_str(), m.per_scene[i].oob_fraction,
                    m.per_scene[i].col_fraction, m.per_scene[i].vbl);
      out << line;
    }
    std::snprintf(line, sizeof line, "OBR %.4f  CNR %.4f  VBL %.3f L over %zu scenes\n", m.obr, m.cnr, m.vbl, m.scene_count);
    out << line;
  } else {
    print_json(out, j);
  }
  return 0;
}

// ---------------------------------------------------------------------- render

struct RenderArgs {
  std::string in_path;
  std::string out_path;
  bool merged = false;
  double px_per_meter = 80.0;
  double grid_step = 1.0;
  bool no_labels = false;
};

int cmd_render(const RenderArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const std::string ext = fs::path(a.out_path).extension().string();
  if (ext != ".svg" && ext != ".png") throw UsageError("--out must end in .svg or .png");
  if (ext == ".svg" && a.merged) throw UsageError("--merged needs a .png output");
  if (!(a.px_per_meter > 0.0) || !(a.grid_step > 0.0)) throw UsageError("--px-per-meter and --grid-step must be positive");
  RenderOptions opts;
  opts.px_per_meter = a.px_per_meter;
  opts.grid_step = a.grid_step;
  opts.label_boxes = !a.no_labels;
  opts.merged = a.merged;
  const Scene scene = load_scene_file(a.in_path);
  if (ext == ".svg") {
    write_text_file_atomic(a.out_path, render_topdown(scene, opts));
  } else {
    const std::vector<std::uint8_t> png = render_png(scene, opts);
    write_text_file_atomic(a.out_path, std::string(png.begin(), png.end()));
  }
  const Json config{{"px_per_meter", opts.px_per_meter}, {"grid_step", opts.grid_step},
                    {"label_boxes", opts.label_boxes}, {"merged", opts.merged}};
  write_manifest(a.out_path + ".manifest.json", "render", common, config, std::nullopt, {a.in_path}, {a.out_path}, start);
  print_json(out, Json{{"out", a.out_path}, {"objects", scene.objects.size()}});
  return 0;
}

// --------------------------------------------------------------- make-fixtures

struct FixtureArgs {
  std::string out_dir;
  std::size_t count = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> variants{"chaotic", "missing", "chaotic_missing"};
};

int cmd_fixtures(const FixtureArgs& a, const Common& common, std::ostream& out) {
  const auto start = Clock::now();
  const AssetCatalog catalog = load_catalog(common);
  std::vector<GoalVariant> variants;
  for (const auto& v : a.variants) variants.push_back(goal_variant_from_name(v));

  const fs::path dir(a.out_dir);
  const std::vector<NamedScene> clean = make_fixture_set(a.count, a.seed, catalog);
  std::vector<std::string> outputs;
  for (const auto& s : clean) {
    const std::string rel = "clean/" + s.id + ".json";
    fs::create_directories(dir / "clean");
    write_text_file_atomic(dir / rel, serialize_scene(s.scene));
    outputs.push_back(rel);
    for (std::size_t k = 0; k < variants.size(); ++k) {
      const std::string name(goal_variant_name(variants[k]));
      const Scene g = make_goal_scene(s.scene, variants[k], derive_seed(a.seed, s.id, k + 1), catalog);
      fs::create_directories(dir / name);
      write_text_file_atomic(dir / name / (s.id + ".json"), serialize_scene(g));
      outputs.push_back(name + "/" + s.id + ".json");
    }
  }
  Json config{{"count", a.count}, {"variants", a.variants}};
  write_manifest(dir / "manifest.json", "make-fixtures", common, config, a.seed, {}, outputs, start);
  print_json(out, Json{{"scenes", clean.size()}, {"files", outputs.size()}, {"out", a.out_dir}});
  return 0;
}

void report_error(std::ostream& err, const Common& common, std::string_view code, const std::string& message) {
  if (common.json_errors) {
    err << write_json_line(Json{{"error", code}, {"message", message}}, FloatFormat::RoundTrip) << "\n";
  } else {
    err << "error: " << message << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"scenechain: scene layout synthesis, episodes and scoring"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SCENECHAIN_VERSION);

  Common common;
  app.add_option("--catalog", common.catalog_path, "Asset catalog JSON (default: $SCENECHAIN_CATALOG or built-in)");
  app.add_option("--config", common.config_path, "JSON config file; flags take precedence");
  app.add_flag("--json", common.json_errors, "Machine-readable errors on stderr");
  app.add_flag("--pretty", common.pretty, "Human-readable tables instead of JSON");
  app.add_option("--jobs,-j", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-chains", "Synthesize edit chains from clean scenes");
  synth_cmd->add_option("--scenes", synth.scenes_dir, "Directory of scene JSON files")->required()->check(CLI::ExistingDirectory);
  synth_cmd->add_option("--out", synth.out_dir, "Dataset output directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Base seed");
  synth_cmd->add_option("--candidates", synth.candidates, "Candidate chains per scene");
  synth_cmd->add_option("--keep", synth.keep, "Chains kept per scene");
  synth_cmd->add_option("--judge", synth.judge, "mock or http:URL");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-chains", "Replay every chain of a dataset");
  verify_cmd->add_option("dataset", verify.dataset_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);

  EpisodeArgs episode;
  auto* episode_cmd = app.add_subcommand("run-episode", "Run one episode and record it");
  episode_cmd->add_option("--policy", episode.policy, "replay, random, greedy or http:URL");
  episode_cmd->add_option("--judge", episode.judge, "mock or http:URL");
  episode_cmd->add_option("--prompt", episode.prompt, "Instruction text");
  episode_cmd->add_option("--init", episode.init_path, "Starting scene (goal-oriented mode)")->check(CLI::ExistingFile);
  episode_cmd->add_option("--chain", episode.chain_path, "Chain file for --policy replay")->check(CLI::ExistingFile);
  episode_cmd->add_option("--seed", episode.seed, "Seed");
  episode_cmd->add_option("--out", episode.out_dir, "Record directory")->required();
  episode_cmd->add_option("--max-turns", episode.max_turns, "Edit turn budget")->check(CLI::PositiveNumber);
  episode_cmd->add_option("--room-type", episode.room_type, "Override the room type read from the prompt");
  episode_cmd->add_flag("--render", episode.render, "Attach renders to observations");
  episode_cmd->add_flag("--no-opt", episode.no_opt, "Skip the physics optimizer after the last turn");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score-episode", "Recompute the rewards of a stored episode");
  score_cmd->add_option("record", score.record_dir, "Episode record directory")->required()->check(CLI::ExistingDirectory);

  OptimizeArgs optimize_args;
  auto* opt_cmd = app.add_subcommand("optimize", "Run the physics optimizer on a scene");
  opt_cmd->add_option("--in", optimize_args.in_path, "Input scene")->required()->check(CLI::ExistingFile);
  opt_cmd->add_option("--out", optimize_args.out_path, "Output scene")->required();
  opt_cmd->add_option("--report", optimize_args.report_path, "Optimizer report JSON");
  opt_cmd->add_option("--seed", optimize_args.seed, "Seed");
  opt_cmd->add_option("--max-steps", optimize_args.max_steps, "Iteration cap");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "OBR, CNR and VBL over a directory of scenes");
  metrics_cmd->add_option("--scenes", metrics.scenes_dir, "Directory of scene JSON files")->required()->check(CLI::ExistingDirectory);
  metrics_cmd->add_option("--out", metrics.out_path, "Also write the JSON result here");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render a scene to SVG or PNG");
  render_cmd->add_option("--in", render.in_path, "Input scene")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--out", render.out_path, "Output .svg or .png")->required();
  render_cmd->add_flag("--merged", render.merged, "Top-down and isometric panels side by side (PNG)");
  render_cmd->add_option("--px-per-meter", render.px_per_meter, "Top-down scale");
  render_cmd->add_option("--grid-step", render.grid_step, "Grid spacing in meters");
  render_cmd->add_flag("--no-labels", render.no_labels, "Omit object labels");

  FixtureArgs fixtures;
  auto* fixtures_cmd = app.add_subcommand("make-fixtures", "Generate clean scenes and goal-oriented starting scenes");
  fixtures_cmd->add_option("--out", fixtures.out_dir, "Output directory")->required();
  fixtures_cmd->add_option("--count", fixtures.count, "Number of clean scenes");
  fixtures_cmd->add_option("--seed", fixtures.seed, "Seed");
  fixtures_cmd->add_option("--variants", fixtures.variants, "chaotic, missing, chaotic_missing")->delimiter(',');

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (common.json_errors) {
      report_error(err, common, "UsageError", e.what());
    } else {
      app.exit(e, out, err);
    }
    return 2;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, *synth_cmd, common, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, common, out);
    if (episode_cmd->parsed()) return cmd_episode(episode, *episode_cmd, common, out);
    if (score_cmd->parsed()) return cmd_score(score, common, out);
    if (opt_cmd->parsed()) return cmd_optimize(optimize_args, *opt_cmd, common, out);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics, common, out);
    if (render_cmd->parsed()) return cmd_render(render, common, out);
    if (fixtures_cmd->parsed()) return cmd_fixtures(fixtures, common, out);
  } catch (const UsageError& e) {
    report_error(err, common, "UsageError", e.what());
    return 2;
  } catch (const Error& e) {
    report_error(err, common, error_code_name(e.code()), e.detail());
    return 1;
  } catch (const fs::filesystem_error& e) {
    report_error(err, common, "Io", e.what());
    return 1;
  } catch (const Json::exception& e) {
    report_error(err, common, "MalformedJson", e.what());
    return 1;
  }
  return 2;
}

}  // namespace scenechain
