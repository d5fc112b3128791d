#include "parapush/parareal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <optional>
#include <string>

#include "parapush/angle.hpp"
#include "parapush/errors.hpp"
#include "parapush/geometry.hpp"
#include "parapush/metrics.hpp"
#include "parapush/worker_pool.hpp"

namespace parapush {
namespace {

ModelTag parareal_tag(int k) { return {ModelTag::Kind::parareal, k}; }

/// Evaluates F on every state of the previous iterate. Failures are reported
/// for the lowest failing slice so the error does not depend on scheduling.
std::vector<State> fine_sweep(const std::vector<State>& prev, const ControlSequence& controls,
                              const PhysicsParams& physics, const SceneSpec& scene,
                              WorkerPool* pool) {
  const std::size_t n = controls.size();
  std::vector<State> out(n);
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::size_t i) {
    try {
      out[i] = fine_step(prev[i], controls[i], physics, scene);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (pool != nullptr && pool->concurrency() > 1) {
    pool->parallel_for(n, body);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const InvalidArgument&) {
        throw;
      } catch (const std::exception& e) {
        throw RolloutError(i, e.what());
      }
    }
  }
  return out;
}

}  // namespace

State parareal_combine(const State& coarse_new, const State& fine, const State& coarse_old) {
  auto lin = [](double c_new, double f, double c_old) { return f + (c_new - c_old); };
  State x;
  x.pusher_pos = {lin(coarse_new.pusher_pos.x, fine.pusher_pos.x, coarse_old.pusher_pos.x),
                  lin(coarse_new.pusher_pos.y, fine.pusher_pos.y, coarse_old.pusher_pos.y)};
  x.pusher_vel = {lin(coarse_new.pusher_vel.x, fine.pusher_vel.x, coarse_old.pusher_vel.x),
                  lin(coarse_new.pusher_vel.y, fine.pusher_vel.y, coarse_old.pusher_vel.y)};
  x.slider_pose.x = lin(coarse_new.slider_pose.x, fine.slider_pose.x, coarse_old.slider_pose.x);
  x.slider_pose.y = lin(coarse_new.slider_pose.y, fine.slider_pose.y, coarse_old.slider_pose.y);
  x.slider_pose.theta =
      wrap_angle(fine.slider_pose.theta +
                 angle_diff(coarse_new.slider_pose.theta, coarse_old.slider_pose.theta));
  x.slider_vel = {lin(coarse_new.slider_vel.vx, fine.slider_vel.vx, coarse_old.slider_vel.vx),
                  lin(coarse_new.slider_vel.vy, fine.slider_vel.vy, coarse_old.slider_vel.vy),
                  lin(coarse_new.slider_vel.omega, fine.slider_vel.omega,
                      coarse_old.slider_vel.omega)};
  return x;
}

PararealResult parareal_predict(const State& state0, const ControlSequence& controls,
                                const PararealConfig& config, const PhysicsParams& physics,
                                const CoarseParams& coarse, const SceneSpec& scene,
                                WorkerPool* pool) {
  const std::size_t n = controls.size();
  const int k_total = config.iterations;
  if (n == 0) {
    throw InvalidArgument("parareal_predict: empty control sequence");
  }
  if (k_total < 0 || static_cast<std::size_t>(k_total) > n) {
    throw InvalidArgument("parareal_predict: iterations K=" + std::to_string(k_total) +
                          " must satisfy 0 <= K <= N=" + std::to_string(n));
  }
  if (config.workers < 0) {
    throw InvalidArgument("parareal_predict: workers must be >= 0");
  }

  std::unique_ptr<WorkerPool> local_pool;
  if (pool == nullptr && k_total > 0) {
    const std::size_t workers = config.workers > 0
                                    ? static_cast<std::size_t>(config.workers)
                                    : std::min(n, hardware_threads());
    if (workers > 1) {
      local_pool = std::make_unique<WorkerPool>(std::min(workers, n));
      pool = local_pool.get();
    }
  }

  PararealResult result;
  result.per_iteration.reserve(static_cast<std::size_t>(k_total) + 1);
  Trajectory initial = coarse_rollout(state0, controls, coarse, scene);
  initial.model = parareal_tag(0);
  result.per_iteration.push_back(std::move(initial));
  result.coarse_eval_count = n;

  for (int k = 0; k < k_total; ++k) {
    const std::vector<State>& prev = result.per_iteration.back().states;
    const std::vector<State> fine = fine_sweep(prev, controls, physics, scene, pool);
    result.fine_eval_count += n;

    Trajectory next;
    next.model = parareal_tag(k + 1);
    next.controls = controls;
    next.states.reserve(n + 1);
    next.states.push_back(state0);
    for (std::size_t i = 0; i < n; ++i) {
      const State coarse_new = coarse_step(next.states[i], controls[i], coarse, scene);
      const State coarse_old = coarse_step(prev[i], controls[i], coarse, scene);
      State x = parareal_combine(coarse_new, fine[i], coarse_old);
      if (config.project_iterates) {
        x = project_feasible(x, scene);
      }
      next.states.push_back(x);
    }
    result.coarse_eval_count += 2 * n;
    result.per_iteration.push_back(std::move(next));
  }

  result.trajectory = result.per_iteration.back();
  return result;
}

double predicted_speedup(double coarse_cost, double fine_cost, int slices, int iterations) {
  if (!(fine_cost > 0.0) || !(coarse_cost >= 0.0) || !std::isfinite(coarse_cost) ||
      !std::isfinite(fine_cost)) {
    throw InvalidArgument("predicted_speedup: need c_f > 0 and c_c >= 0");
  }
  if (slices < 1 || iterations < 1) {
    throw InvalidArgument("predicted_speedup: need N >= 1 and K >= 1");
  }
  const double k = iterations;
  return 1.0 / ((1.0 + k) * (coarse_cost / fine_cost) + k / static_cast<double>(slices));
}

std::vector<ConvergenceEntry> convergence_report(const State& state0,
                                                 const ControlSequence& controls, int k_max,
                                                 const PararealConfig& config,
                                                 const PhysicsParams& physics,
                                                 const CoarseParams& coarse,
                                                 const SceneSpec& scene, WorkerPool* pool) {
  PararealConfig cfg = config;
  cfg.iterations = k_max;
  const PararealResult result =
      parareal_predict(state0, controls, cfg, physics, coarse, scene, pool);
  const Trajectory fine = fine_rollout(state0, controls, physics, scene);
  std::vector<ConvergenceEntry> out;
  out.reserve(result.per_iteration.size());
  for (std::size_t k = 0; k < result.per_iteration.size(); ++k) {
    out.push_back({static_cast<int>(k), trajectory_error(result.per_iteration[k], fine)});
  }
  return out;
}

}  // namespace parapush
