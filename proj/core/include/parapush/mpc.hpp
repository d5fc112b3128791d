// Receding-horizon push planning: optimise, execute the first control in the
// fine-model world, observe, warm-start, repeat.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "parapush/model.hpp"
#include "parapush/optimizer.hpp"
#include "parapush/types.hpp"

namespace parapush {

struct MPCConfig {
  int horizon{4};
  double control_duration{1.0};  // s
  int max_actions{20};
  /// Std of Gaussian noise added to the observed slider position, mm.
  double world_noise_std{0.0};
  /// Speed of the straight-line initial candidate, mm/s.
  double initial_push_speed{25.0};
  /// Warm start repeats the last control (true) or appends a zero control.
  bool warm_start_duplicate_last{true};

  friend bool operator==(const MPCConfig&, const MPCConfig&) = default;
};

void validate_mpc(const MPCConfig& config);

enum class Outcome { success, hit_obstacle, fell_off_table, timeout, aborted };

[[nodiscard]] std::string to_string(Outcome outcome);

struct EpisodeResult {
  Outcome outcome{Outcome::timeout};
  int actions_executed{0};
  double wall_clock_planning{0.0};  // s, optimisation time only
  std::vector<State> state_log;
  std::vector<Control> action_log;
  /// Set when outcome == aborted.
  std::string diagnostic;
};

/// Called before each optimisation with the step index and the candidate
/// sequence handed to the optimizer.
using PlanProbe = std::function<void(int step, const ControlSequence& candidate)>;

struct EpisodeSetup {
  ModelChoice model;
  MPCConfig mpc;
  OptimizerConfig optimizer;
  CostWeights weights;
  PhysicsParams physics;
  CoarseParams coarse;
  PararealConfig parareal;
};

/// Termination predicates checked after each executed action, in this order:
/// obstacle, table edge, goal, action budget.
[[nodiscard]] bool slider_hits_obstacle(const State& state, const SceneSpec& scene);
[[nodiscard]] bool slider_off_table(const State& state, const SceneSpec& scene);
[[nodiscard]] bool slider_in_goal(const State& state, const SceneSpec& scene);

/// Straight push toward the goal at `speed` from the slider's position.
[[nodiscard]] ControlSequence straight_line_candidate(const State& state, const SceneSpec& scene,
                                                      int horizon, double duration, double speed);

/// Shifts left by one; the tail repeats the last control or becomes zero.
[[nodiscard]] ControlSequence warm_start(const ControlSequence& previous, bool duplicate_last);

/// Runs one closed-loop episode. The world is always the fine model; the
/// planner uses `setup.model`. Model errors abort the episode (outcome
/// aborted, with a diagnostic) rather than throwing.
[[nodiscard]] EpisodeResult run_episode(const SceneSpec& scene, const EpisodeSetup& setup,
                                        WorkerPool* pool = nullptr,
                                        const PlanProbe& probe = {});

struct BenchmarkEpisode {
  std::size_t scene_index{0};
  ModelChoice model;
  std::uint64_t seed{0};
  EpisodeResult result;
};

struct BenchmarkCell {
  std::size_t scene_index{0};
  ModelChoice model;
  int episodes{0};
  double success_rate{0.0};
  double mean_planning_seconds{0.0};
  double std_planning_seconds{0.0};
  double mean_actions{0.0};
  int aborted{0};
};

struct BenchmarkTable {
  std::vector<BenchmarkEpisode> episodes;
  std::vector<BenchmarkCell> cells;
};

/// Every (scene, model, seed) combination; the optimizer seed of each episode
/// is the listed seed. Cells aggregate over seeds.
[[nodiscard]] BenchmarkTable run_benchmark(const std::vector<SceneSpec>& scenes,
                                           const std::vector<ModelChoice>& models,
                                           const std::vector<std::uint64_t>& seeds,
                                           const EpisodeSetup& base, WorkerPool* pool = nullptr);

}  // namespace parapush
