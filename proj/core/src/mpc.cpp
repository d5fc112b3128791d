#include "parapush/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>

#include "parapush/errors.hpp"
#include "parapush/fine_model.hpp"
#include "parapush/geometry.hpp"

namespace parapush {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t step_seed(std::uint64_t seed, int step) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(step) + 1));
}

std::optional<Outcome> check_termination(const State& state, const SceneSpec& scene,
                                         int actions, int max_actions) {
  if (slider_hits_obstacle(state, scene)) return Outcome::hit_obstacle;
  if (slider_off_table(state, scene)) return Outcome::fell_off_table;
  if (slider_in_goal(state, scene)) return Outcome::success;
  if (actions >= max_actions) return Outcome::timeout;
  return std::nullopt;
}

}  // namespace

void validate_mpc(const MPCConfig& c) {
  if (c.horizon < 1) throw InvalidArgument("mpc.horizon must be >= 1");
  if (c.max_actions < 1) throw InvalidArgument("mpc.max_actions must be >= 1");
  if (!(c.control_duration > 0.0)) throw InvalidArgument("mpc.control_duration must be > 0");
  if (!(c.world_noise_std >= 0.0)) throw InvalidArgument("mpc.world_noise_std must be >= 0");
  if (!(c.initial_push_speed >= 0.0)) throw InvalidArgument("mpc.initial_push_speed must be >= 0");
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success:
      return "success";
    case Outcome::hit_obstacle:
      return "hit_obstacle";
    case Outcome::fell_off_table:
      return "fell_off_table";
    case Outcome::timeout:
      return "timeout";
    case Outcome::aborted:
      return "aborted";
  }
  return "unknown";
}

bool slider_hits_obstacle(const State& state, const SceneSpec& scene) {
  return overlaps(scene.slider_shape, state.slider_pose, scene.obstacle);
}

bool slider_off_table(const State& state, const SceneSpec& scene) {
  return !scene.table_bounds.contains(state.slider_pose.position());
}

bool slider_in_goal(const State& state, const SceneSpec& scene) {
  return squared_norm(state.slider_pose.position() - scene.goal.center) <=
         scene.goal.radius * scene.goal.radius;
}

ControlSequence straight_line_candidate(const State& state, const SceneSpec& scene, int horizon,
                                        double duration, double speed) {
  const Vec2 to_goal = scene.goal.center - state.slider_pose.position();
  const double dist = norm(to_goal);
  const Vec2 vel = dist > 0.0 ? to_goal * (speed / dist) : Vec2{};
  return ControlSequence(static_cast<std::size_t>(horizon),
                         clamp_speed(Control{vel, duration}, scene.max_push_speed));
}

ControlSequence warm_start(const ControlSequence& previous, bool duplicate_last) {
  if (previous.empty()) {
    return previous;
  }
  ControlSequence out(previous.begin() + 1, previous.end());
  Control tail = previous.back();
  if (!duplicate_last) {
    tail.vel = {};
  }
  out.push_back(tail);
  return out;
}

EpisodeResult run_episode(const SceneSpec& scene, const EpisodeSetup& setup, WorkerPool* pool,
                          const PlanProbe& probe) {
  validate_mpc(setup.mpc);
  const MPCConfig& mpc = setup.mpc;

  ModelContext context{scene, setup.physics, setup.coarse, setup.parareal, pool};

  EpisodeResult result;
  State state = scene.start_state;
  result.state_log.push_back(state);

  if (auto done = check_termination(state, scene, 0, mpc.max_actions)) {
    result.outcome = *done;
    return result;
  }

  std::mt19937_64 world_rng(splitmix64(setup.optimizer.rng_seed ^ 0xA5A5A5A5A5A5A5A5ull));
  std::normal_distribution<double> world_noise(0.0, 1.0);

  ControlSequence candidate = straight_line_candidate(state, scene, mpc.horizon,
                                                      mpc.control_duration,
                                                      mpc.initial_push_speed);
  for (int step = 0;; ++step) {
    if (probe) {
      probe(step, candidate);
    }
    OptimizerConfig opt = setup.optimizer;
    opt.rng_seed = step_seed(setup.optimizer.rng_seed, step);

    OptimizeResult plan;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      plan = optimize(state, candidate, setup.model, setup.weights, opt, context);
    } catch (const std::exception& e) {
      result.wall_clock_planning +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      result.outcome = Outcome::aborted;
      result.diagnostic = e.what();
      return result;
    }
    result.wall_clock_planning +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const Control action = plan.controls.front();
    try {
      state = fine_step(state, action, setup.physics, scene);
    } catch (const std::exception& e) {
      result.outcome = Outcome::aborted;
      result.diagnostic = std::string("world step failed: ") + e.what();
      return result;
    }
    if (mpc.world_noise_std > 0.0) {
      state.slider_pose.x += mpc.world_noise_std * world_noise(world_rng);
      state.slider_pose.y += mpc.world_noise_std * world_noise(world_rng);
    }
    ++result.actions_executed;
    result.action_log.push_back(action);
    result.state_log.push_back(state);

    if (auto done = check_termination(state, scene, result.actions_executed, mpc.max_actions)) {
      result.outcome = *done;
      return result;
    }
    candidate = warm_start(plan.controls, mpc.warm_start_duplicate_last);
  }
}

BenchmarkTable run_benchmark(const std::vector<SceneSpec>& scenes,
                             const std::vector<ModelChoice>& models,
                             const std::vector<std::uint64_t>& seeds, const EpisodeSetup& base,
                             WorkerPool* pool) {
  if (scenes.empty() || models.empty() || seeds.empty()) {
    throw InvalidArgument("run_benchmark: scenes, models and seeds must be non-empty");
  }
  BenchmarkTable table;
  for (std::size_t si = 0; si < scenes.size(); ++si) {
    for (const ModelChoice& model : models) {
      BenchmarkCell cell;
      cell.scene_index = si;
      cell.model = model;
      double sum_time = 0.0;
      double sum_time_sq = 0.0;
      double sum_actions = 0.0;
      int successes = 0;
      for (std::uint64_t seed : seeds) {
        EpisodeSetup setup = base;
        setup.model = model;
        setup.optimizer.rng_seed = seed;
        BenchmarkEpisode ep{si, model, seed, run_episode(scenes[si], setup, pool)};
        const EpisodeResult& r = ep.result;
        ++cell.episodes;
        successes += r.outcome == Outcome::success ? 1 : 0;
        cell.aborted += r.outcome == Outcome::aborted ? 1 : 0;
        sum_time += r.wall_clock_planning;
        sum_time_sq += r.wall_clock_planning * r.wall_clock_planning;
        sum_actions += r.actions_executed;
        table.episodes.push_back(std::move(ep));
      }
      const double count = cell.episodes;
      cell.success_rate = successes / count;
      cell.mean_planning_seconds = sum_time / count;
      const double var = cell.episodes > 1
                             ? std::max(0.0, (sum_time_sq - sum_time * sum_time / count) /
                                                 (count - 1.0))
                             : 0.0;
      cell.std_planning_seconds = std::sqrt(var);
      cell.mean_actions = sum_actions / count;
      table.cells.push_back(cell);
    }
  }
  return table;
}

}  // namespace parapush
