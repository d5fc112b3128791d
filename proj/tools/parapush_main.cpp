// parapush: rollouts, Parareal diagnostics, timing and push-planning
// experiments. Every run writes its CSV outputs and a manifest.json into the
// output directory.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "parapush/errors.hpp"
#include "parapush/experiments.hpp"
#include "parapush/io.hpp"
#include "parapush/model.hpp"
#include "parapush/mpc.hpp"
#include "parapush/scenarios.hpp"
#include "parapush/scene.hpp"
#include "parapush/worker_pool.hpp"

namespace fs = std::filesystem;
using namespace parapush;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

struct Globals {
  std::string scene_path;
  std::uint64_t seed{1};
  int threads{0};
  std::string out_dir{"out"};
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Scene from --scene when given, otherwise `fallback`.
SceneDocument load_or(const Globals& g, const SceneSpec& fallback) {
  SceneDocument doc;
  if (!g.scene_path.empty()) {
    doc = load_scene_document(g.scene_path);
  } else {
    doc.scene = fallback;
  }
  doc.scene = validate_scene(doc.scene);
  validate_physics(doc.physics);
  return doc;
}

std::unique_ptr<WorkerPool> make_pool(const Globals& g) {
  const std::size_t threads =
      g.threads > 0 ? static_cast<std::size_t>(g.threads) : hardware_threads();
  return std::make_unique<WorkerPool>(threads);
}

std::ofstream open_output(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  const fs::path path = fs::path(g.out_dir) / name;
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

void write_manifest(const Globals& g, const std::string& command,
                    const std::map<std::string, std::string>& overrides,
                    const std::vector<std::string>& argv) {
  RunManifest m;
  m.command = command;
  m.scene_path = g.scene_path;
  m.overrides = overrides;
  m.seed = g.seed;
  m.output_dir = g.out_dir;
  m.tool_version = PARAPUSH_VERSION;
  m.timestamp = utc_timestamp();
  m.argv = argv;
  open_output(g, "manifest.json") << to_json(m) << '\n';
}

std::string file_safe(std::string text) {
  std::replace(text.begin(), text.end(), ':', '-');
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parareal pushing predictions and push planning"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--scene", g.scene_path, "Scene JSON file");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Thread budget (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out_dir, "Output directory");

  std::map<std::string, std::string> overrides;
  auto record = [&overrides](const std::string& key) {
    return [&overrides, key](const std::string& value) { overrides[key] = value; };
  };

  // rollout
  auto* rollout_cmd = app.add_subcommand("rollout", "Roll a control sequence out with one model");
  std::string model_text;
  std::string controls_text;
  double dt = 1.0;
  std::string rollout_file = "trajectory.csv";
  rollout_cmd->add_option("--model", model_text, "coarse | fine | parareal:K")->required();
  rollout_cmd->add_option("--controls", controls_text,
                          "Controls 'vx,vy;vx,vy;...' in mm/s (default: canonical push)");
  rollout_cmd->add_option("--dt", dt, "Control duration, s");
  rollout_cmd->add_option("--file", rollout_file, "Output file name inside --out");

  // converge
  auto* converge_cmd = app.add_subcommand("converge", "Parareal error per iteration");
  std::string push_text = "center";
  std::string shape_text = "box";
  bool no_project = false;
  converge_cmd->add_option("--push", push_text, "center | side");
  converge_cmd->add_option("--shape", shape_text, "box | disc");
  converge_cmd->add_flag("--no-project", no_project, "Disable projection of iterates");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time coarse, fine and Parareal rollouts");
  std::string k_list = "1,2,3,4";
  int slices = 4;
  int reps = 100;
  bench_cmd->add_option("--k", k_list, "Comma-separated Parareal iteration counts");
  bench_cmd->add_option("--n", slices, "Time slices N")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", reps, "Repetitions per model")->check(CLI::PositiveNumber);

  // openloop
  auto* openloop_cmd = app.add_subcommand("openloop", "Open-loop final-state statistics");
  int starts = 100;
  openloop_cmd->add_option("--starts", starts, "Number of random start states")
      ->check(CLI::PositiveNumber);

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Closed-loop push planning benchmark");
  int generate = 0;
  std::string models_text = "coarse,parareal:1,parareal:2,parareal:3,fine";
  std::string seeds_text;
  plan_cmd->add_option("--generate", generate, "Generate this many benchmark scenes");
  plan_cmd->add_option("--models", models_text, "Comma-separated planning models");
  plan_cmd->add_option("--seeds", seeds_text, "Comma-separated episode seeds (default: --seed)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check a scene file");

  for (auto* cmd : {rollout_cmd, converge_cmd, bench_cmd, openloop_cmd, plan_cmd}) {
    for (auto* opt : cmd->get_options()) {
      if (opt->get_name() == "--help") continue;
      const std::string key = opt->get_name().substr(2);
      opt->each(record(key));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  const std::vector<std::string> arguments(argv, argv + argc);

  try {
    if (*validate_cmd) {
      if (g.scene_path.empty()) {
        std::cerr << "validate: --scene is required\n";
        return kUsage;
      }
      (void)load_or(g, SceneSpec{});
      std::cout << g.scene_path << ": ok\n";
      return kOk;
    }

    auto pool = make_pool(g);

    if (*rollout_cmd) {
      const ModelChoice model = parse_model(model_text);
      const SceneDocument doc =
          load_or(g, canonical_scene(PushKind::center, ShapeKind::box));
      const ControlSequence controls =
          controls_text.empty() ? canonical_controls() : parse_controls(controls_text, dt);
      const ModelContext ctx{doc.scene, doc.physics, doc.coarse, doc.parareal, pool.get()};
      const Trajectory traj = rollout(model, doc.scene.start_state, controls, ctx);
      auto out = open_output(g, rollout_file);
      write_trajectory_csv(out, traj);
      write_manifest(g, "rollout", overrides, arguments);
      return kOk;
    }

    if (*converge_cmd) {
      SceneDocument doc = load_or(
          g, canonical_scene(parse_push_kind(push_text), parse_shape_kind(shape_text)));
      if (no_project) doc.parareal.project_iterates = false;
      const auto rows = run_converge(doc, canonical_controls(), pool.get());
      auto out = open_output(g, "convergence.csv");
      write_convergence_csv(out, rows);
      write_manifest(g, "converge", overrides, arguments);
      return kOk;
    }

    if (*bench_cmd) {
      const SceneDocument doc =
          load_or(g, canonical_scene(PushKind::center, ShapeKind::box));
      BenchOptions options;
      options.repetitions = reps;
      options.iterations.clear();
      for (const auto& k : split(k_list, ',')) options.iterations.push_back(std::stoi(k));
      if (hardware_threads() < static_cast<std::size_t>(slices)) {
        std::cerr << "warning: " << hardware_threads() << " logical cores for N=" << slices
                  << " time slices; Parareal timings will not show the parallel speedup\n";
      }
      const ControlSequence controls(static_cast<std::size_t>(slices),
                                     canonical_controls().front());
      WorkerPool bench_pool(std::min<std::size_t>(pool->concurrency(),
                                                  static_cast<std::size_t>(slices)));
      const auto rows = run_bench(doc, controls, options, &bench_pool);
      auto out = open_output(g, "bench.csv");
      write_bench_csv(out, rows);
      write_manifest(g, "bench", overrides, arguments);
      return kOk;
    }

    if (*openloop_cmd) {
      const SceneDocument doc = load_or(g, fixture_scene(ShapeKind::box));
      const auto rows =
          run_openloop(doc, static_cast<std::size_t>(starts), g.seed, pool.get());
      auto out = open_output(g, "openloop.csv");
      write_openloop_csv(out, rows);
      write_manifest(g, "openloop", overrides, arguments);
      return kOk;
    }

    if (*plan_cmd) {
      SceneDocument doc;
      std::vector<SceneSpec> scenes;
      if (generate > 0) {
        if (!g.scene_path.empty()) doc = load_scene_document(g.scene_path);
        scenes = generate_benchmark_scenes(static_cast<std::size_t>(generate), g.seed);
      } else {
        if (g.scene_path.empty()) {
          std::cerr << "plan: give --scene or --generate S\n";
          return kUsage;
        }
        doc = load_or(g, SceneSpec{});
        scenes.push_back(doc.scene);
      }
      std::vector<ModelChoice> models;
      for (const auto& m : split(models_text, ',')) models.push_back(parse_model(m));
      std::vector<std::uint64_t> seeds;
      for (const auto& s : split(seeds_text, ',')) seeds.push_back(std::stoull(s));
      if (seeds.empty()) seeds.push_back(g.seed);

      EpisodeSetup setup;
      setup.mpc = doc.mpc;
      setup.optimizer = doc.optimizer;
      setup.weights = doc.cost;
      setup.physics = doc.physics;
      setup.coarse = doc.coarse;
      setup.parareal = doc.parareal;
      const BenchmarkTable table = run_benchmark(scenes, models, seeds, setup, pool.get());

      auto episodes_csv = open_output(g, "plan.csv");
      write_plan_csv(episodes_csv, table);
      auto summary_csv = open_output(g, "plan_summary.csv");
      write_plan_summary_csv(summary_csv, table);
      const fs::path log_dir = fs::path(g.out_dir) / "episodes";
      fs::create_directories(log_dir);
      for (const auto& e : table.episodes) {
        Trajectory log{e.result.state_log, e.model, e.result.action_log};
        write_trajectory_csv((log_dir / ("scene" + std::to_string(e.scene_index) + "_" +
                                         file_safe(e.model.to_string()) + "_seed" +
                                         std::to_string(e.seed) + ".csv"))
                                 .string(),
                             log);
      }
      write_manifest(g, "plan", overrides, arguments);
      return kOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid scene:\n";
    for (const auto& issue : e.issues()) {
      std::cerr << "  " << issue.field << ": " << issue.message << '\n';
    }
    return kValidation;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
