// Push-planning cost and a derivative-free sampling trajectory optimizer.
//
// The optimizer perturbs the nominal control sequence with i.i.d. Gaussian
// noise, rolls every perturbed sequence out through the chosen predictor,
// and moves the nominal toward the exponentiated-cost weighted mean of the
// perturbations. An update is kept only if its own rollout is no more
// expensive than the current nominal, so the nominal cost never increases.

#pragma once

#include <cstdint>
#include <vector>

#include "parapush/model.hpp"
#include "parapush/types.hpp"

namespace parapush {

struct CostWeights {
  double w_s{1e4};   // slider obstacle proximity, mm^2
  double w_p{5e3};   // pusher obstacle proximity, mm^2
  double w_u{1e-2};  // control smoothness, s^2/mm^2
  double W_E{1e4};   // slider off the table
  /// Slider footprint overlapping the obstacle; 0 leaves collisions to the
  /// proximity terms alone.
  double W_O{1e7};
  /// Pusher-slider clearance, per mm^2; keeps the pusher near the slider.
  /// 0 disables.
  double w_c{100.0};
  double w{10.0};    // terminal weight

  friend bool operator==(const CostWeights&, const CostWeights&) = default;
};

struct OptimizerConfig {
  int samples_per_iteration{20};
  double exploration_std{10.0};  // mm/s
  int opt_iterations{5};
  /// Scale of cost differences in the exponentiated weights. Costs are
  /// dominated by the terminal term (order 1e5 at the start of a push).
  double temperature{3000.0};
  std::uint64_t rng_seed{0};
  /// Roll samples out concurrently on the worker pool. Off by default so that
  /// parallelism goes to the Parareal time slices only.
  bool parallel_samples{false};

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

void validate_weights(const CostWeights& weights);
void validate_optimizer(const OptimizerConfig& config);

/// Obstacle proximity for slider and pusher, control smoothness, the edge
/// penalty and the collision penalty. A slider or pusher exactly on the obstacle centre costs +inf.
[[nodiscard]] double running_cost(const State& state, const Control& u_prev, const Control& u,
                                  const CostWeights& weights, const SceneSpec& scene);

/// Squared distance (mm^2) from the slider position to the goal centre.
[[nodiscard]] double final_cost(const State& state, const SceneSpec& scene);

/// Running costs at n = 1..N-1 plus w times the final cost at N.
[[nodiscard]] double trajectory_cost(const Trajectory& trajectory,
                                     const ControlSequence& controls,
                                     const CostWeights& weights, const SceneSpec& scene);

/// Limits ‖vel‖ to `max_speed`, keeping the direction.
[[nodiscard]] Control clamp_speed(Control control, double max_speed) noexcept;

struct OptimizeResult {
  ControlSequence controls;
  double initial_cost{0.0};
  double final_cost{0.0};
  /// Nominal cost after each optimizer iteration.
  std::vector<double> cost_history;
  int accepted_updates{0};
};

/// Runs config.opt_iterations sampling iterations from `init_controls`.
/// Deterministic for a given seed; every sample draws from its own stream
/// derived from (seed, iteration, sample index).
///
/// Throws InvalidArgument for an empty sequence and OptimizationFailed when
/// every rollout in an iteration fails.
[[nodiscard]] OptimizeResult optimize(const State& state0, const ControlSequence& init_controls,
                                      const ModelChoice& model, const CostWeights& weights,
                                      const OptimizerConfig& config,
                                      const ModelContext& context);

}  // namespace parapush
