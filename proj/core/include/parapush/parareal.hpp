// Parareal prediction: a serial coarse sweep corrected by fine evaluations
// that run in parallel across time slices.
//
//   x[k+1][n+1] = C(x[k+1][n]) + F(x[k][n]) - C(x[k][n])
//
// Iterate 0 is the coarse rollout. After k iterations the first k states are
// the serial fine states, and iterate N reproduces the fine rollout.

#pragma once

#include <cstddef>
#include <vector>

#include "parapush/coarse_model.hpp"
#include "parapush/fine_model.hpp"
#include "parapush/types.hpp"

namespace parapush {

class WorkerPool;

struct PararealConfig {
  int iterations{1};
  /// Thread budget for the fine sweep; 0 selects min(N, hardware threads).
  int workers{0};
  /// Project every new iterate state out of pusher/slider penetration.
  bool project_iterates{true};

  friend bool operator==(const PararealConfig&, const PararealConfig&) = default;
};

struct PararealResult {
  Trajectory trajectory;
  /// Iterates 0..K; per_iteration[0] is the coarse rollout.
  std::vector<Trajectory> per_iteration;
  std::size_t fine_eval_count{0};
  std::size_t coarse_eval_count{0};
};

/// Coarse evaluations performed by parareal_predict: N for iterate 0, then N
/// serial-sweep plus N correction evaluations per iteration.
[[nodiscard]] constexpr std::size_t expected_coarse_evals(std::size_t n, std::size_t k) noexcept {
  return n + 2 * k * n;
}

/// Runs K = config.iterations Parareal iterations. Fine evaluations go to
/// `pool` when given, otherwise to a temporary pool sized from
/// config.workers. Results do not depend on the worker count.
///
/// Throws InvalidArgument for K < 0, K > N or an empty control sequence;
/// fine-model failures surface as RolloutError naming the time slice.
[[nodiscard]] PararealResult parareal_predict(const State& state0, const ControlSequence& controls,
                                              const PararealConfig& config,
                                              const PhysicsParams& physics,
                                              const CoarseParams& coarse, const SceneSpec& scene,
                                              WorkerPool* pool = nullptr);

/// Theoretical Parareal speedup over the serial fine rollout:
/// 1 / ((1 + K) * c_c / c_f + K / N), with c_c and c_f the per-slice costs.
/// Throws InvalidArgument unless c_f > 0, c_c >= 0, N >= 1 and K >= 1.
[[nodiscard]] double predicted_speedup(double coarse_cost, double fine_cost, int slices,
                                       int iterations);

struct ConvergenceEntry {
  int iteration{0};
  ErrorReport error;
};

/// Error of every Parareal iterate 0..k_max against the serial fine rollout.
[[nodiscard]] std::vector<ConvergenceEntry> convergence_report(
    const State& state0, const ControlSequence& controls, int k_max, const PararealConfig& config,
    const PhysicsParams& physics, const CoarseParams& coarse, const SceneSpec& scene,
    WorkerPool* pool = nullptr);

/// Combines the three Parareal terms state-wise: fine + (coarse_new - coarse_old),
/// with the angle difference taken on the circle before it is added.
[[nodiscard]] State parareal_combine(const State& coarse_new, const State& fine,
                                     const State& coarse_old);

}  // namespace parapush
