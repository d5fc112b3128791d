#include "parapush/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "parapush/errors.hpp"
#include "parapush/geometry.hpp"
#include "parapush/worker_pool.hpp"

namespace parapush {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
  std::vector<Vec2> perturbation;
  double cost{kInf};
  std::string failure;
};

/// Independent stream per (seed, iteration, sample).
std::mt19937_64 sample_stream(std::uint64_t seed, int iteration, int sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration), static_cast<std::uint32_t>(sample)};
  return std::mt19937_64(seq);
}

double evaluate(const ModelChoice& model, const State& state0, const ControlSequence& controls,
                const CostWeights& weights, const ModelContext& context) {
  const Trajectory traj = rollout(model, state0, controls, context);
  return trajectory_cost(traj, controls, weights, context.scene);
}

}  // namespace

void validate_weights(const CostWeights& w) {
  for (double v : {w.w_s, w.w_p, w.w_u, w.W_E, w.w}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("cost weights must all be finite and > 0");
    }
  }
  if (!(w.W_O >= 0.0) || !std::isfinite(w.W_O)) {
    throw InvalidArgument("cost.W_O must be finite and >= 0");
  }
  if (!(w.w_c >= 0.0) || !std::isfinite(w.w_c)) {
    throw InvalidArgument("cost.w_c must be finite and >= 0");
  }
}

void validate_optimizer(const OptimizerConfig& c) {
  if (c.samples_per_iteration < 1) {
    throw InvalidArgument("optimizer.samples_per_iteration must be >= 1");
  }
  if (!(c.exploration_std > 0.0)) {
    throw InvalidArgument("optimizer.exploration_std must be > 0");
  }
  if (c.opt_iterations < 0) {
    throw InvalidArgument("optimizer.opt_iterations must be >= 0");
  }
  if (!(c.temperature > 0.0)) {
    throw InvalidArgument("optimizer.temperature must be > 0");
  }
}

double running_cost(const State& state, const Control& u_prev, const Control& u,
                     const CostWeights& weights, const SceneSpec& scene) {
  const Vec2 slider = state.slider_pose.position();
  const double ds2 = squared_norm(slider - scene.obstacle.center);
  const double dp2 = squared_norm(state.pusher_pos - scene.obstacle.center);
  if (ds2 == 0.0 || dp2 == 0.0) {
    return kInf;
  }
  double cost = weights.w_s / ds2 + weights.w_p / dp2 +
                weights.w_u * squared_norm(u.vel - u_prev.vel);
  if (!scene.table_bounds.contains(slider)) {
    cost += weights.W_E;
  }
  if (weights.W_O > 0.0 && overlaps(scene.slider_shape, state.slider_pose, scene.obstacle)) {
    cost += weights.W_O;
  }
  if (weights.w_c > 0.0) {
    const double gap = std::max(
        0.0, -penetration(state.pusher_pos, scene.pusher_radius, scene.slider_shape,
                          state.slider_pose)
                  .penetration_depth);
    cost += weights.w_c * gap * gap;
  }
  return cost;
}

double final_cost(const State& state, const SceneSpec& scene) {
  return squared_norm(state.slider_pose.position() - scene.goal.center);
}

double trajectory_cost(const Trajectory& trajectory, const ControlSequence& controls,
                       const CostWeights& weights, const SceneSpec& scene) {
  const std::size_t n = controls.size();
  if (n == 0 || trajectory.states.size() != n + 1) {
    throw InvalidArgument("trajectory_cost: need N >= 1 controls and N + 1 states");
  }
  double cost = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    cost += running_cost(trajectory.states[i], controls[i - 1], controls[i], weights, scene);
  }
  return cost + weights.w * final_cost(trajectory.states[n], scene);
}

Control clamp_speed(Control control, double max_speed) noexcept {
  const double speed = norm(control.vel);
  if (speed > max_speed && speed > 0.0) {
    control.vel *= max_speed / speed;
    // Rounding can leave the scaled norm a hair above the limit.
    while (norm(control.vel) > max_speed) {
      control.vel *= 1.0 - 1e-15;
    }
  }
  return control;
}

OptimizeResult optimize(const State& state0, const ControlSequence& init_controls,
                        const ModelChoice& model, const CostWeights& weights,
                        const OptimizerConfig& config, const ModelContext& context) {
  if (init_controls.empty()) {
    throw InvalidArgument("optimize: empty initial control sequence");
  }
  validate_weights(weights);
  validate_optimizer(config);

  const std::size_t horizon = init_controls.size();
  const double max_speed = context.scene.max_push_speed;

  OptimizeResult result;
  result.controls = init_controls;
  std::string initial_failure;
  try {
    result.initial_cost = evaluate(model, state0, init_controls, weights, context);
  } catch (const std::exception& e) {
    result.initial_cost = kInf;
    initial_failure = e.what();
  }
  double nominal_cost = result.initial_cost;

  for (int iter = 0; iter < config.opt_iterations; ++iter) {
    std::vector<Sample> samples(static_cast<std::size_t>(config.samples_per_iteration));
    auto run_sample = [&](std::size_t s) {
      std::mt19937_64 rng = sample_stream(config.rng_seed, iter, static_cast<int>(s));
      std::normal_distribution<double> noise(0.0, config.exploration_std);
      ControlSequence candidate = result.controls;
      Sample& sample = samples[s];
      sample.perturbation.resize(horizon);
      for (std::size_t n = 0; n < horizon; ++n) {
        const double ex = noise(rng);
        const double ey = noise(rng);
        Control c = candidate[n];
        c.vel += Vec2{ex, ey};
        c = clamp_speed(c, max_speed);
        sample.perturbation[n] = c.vel - candidate[n].vel;
        candidate[n] = c;
      }
      try {
        sample.cost = evaluate(model, state0, candidate, weights, context);
      } catch (const std::exception& e) {
        sample.cost = kInf;
        sample.failure = e.what();
      }
    };
    if (config.parallel_samples && context.pool != nullptr) {
      context.pool->parallel_for(samples.size(), run_sample);
    } else {
      for (std::size_t s = 0; s < samples.size(); ++s) {
        run_sample(s);
      }
    }

    double min_cost = kInf;
    for (const Sample& s : samples) {
      min_cost = std::min(min_cost, s.cost);
    }
    if (!std::isfinite(min_cost)) {
      std::vector<std::string> diagnostics;
      for (const Sample& s : samples) {
        if (!s.failure.empty()) {
          diagnostics.push_back(s.failure);
        }
      }
      if (diagnostics.size() == samples.size()) {
        if (!initial_failure.empty()) {
          diagnostics.insert(diagnostics.begin(), "initial candidate: " + initial_failure);
        }
        throw OptimizationFailed("optimize: every sampled rollout failed in iteration " +
                                     std::to_string(iter),
                                 std::move(diagnostics));
      }
      // All costs infinite but not failures: nothing to learn this round.
      result.cost_history.push_back(nominal_cost);
      continue;
    }

    std::vector<Vec2> step(horizon);
    double weight_sum = 0.0;
    for (const Sample& s : samples) {
      if (!std::isfinite(s.cost)) {
        continue;
      }
      const double wgt = std::exp(-(s.cost - min_cost) / config.temperature);
      weight_sum += wgt;
      for (std::size_t n = 0; n < horizon; ++n) {
        step[n] += s.perturbation[n] * wgt;
      }
    }

    ControlSequence proposal = result.controls;
    for (std::size_t n = 0; n < horizon; ++n) {
      proposal[n].vel += step[n] * (1.0 / weight_sum);
      proposal[n] = clamp_speed(proposal[n], max_speed);
    }
    double proposal_cost = kInf;
    try {
      proposal_cost = evaluate(model, state0, proposal, weights, context);
    } catch (const std::exception&) {
      proposal_cost = kInf;
    }
    if (proposal_cost <= nominal_cost) {
      result.controls = std::move(proposal);
      nominal_cost = proposal_cost;
      ++result.accepted_updates;
    }
    result.cost_history.push_back(nominal_cost);
  }

  result.final_cost = nominal_cost;
  return result;
}

}  // namespace parapush
