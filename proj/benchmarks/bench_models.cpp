// Per-step and per-rollout cost of the coarse, fine and Parareal predictors on
// the canonical centre push.

#include <benchmark/benchmark.h>

#include <algorithm>

#include "parapush/coarse_model.hpp"
#include "parapush/fine_model.hpp"
#include "parapush/parareal.hpp"
#include "parapush/scenarios.hpp"
#include "parapush/scene.hpp"
#include "parapush/worker_pool.hpp"

namespace {

using namespace parapush;

const SceneSpec& scene() {
  static const SceneSpec s = validate_scene(canonical_scene(PushKind::center, ShapeKind::box));
  return s;
}

void BM_CoarseStep(benchmark::State& st) {
  const Control u = canonical_controls().front();
  for (auto _ : st) {
    benchmark::DoNotOptimize(coarse_step(scene().start_state, u, CoarseParams{}, scene()));
  }
}
BENCHMARK(BM_CoarseStep);

void BM_FineStep(benchmark::State& st) {
  const Control u = canonical_controls().front();
  for (auto _ : st) {
    benchmark::DoNotOptimize(fine_step(scene().start_state, u, PhysicsParams{}, scene()));
  }
}
BENCHMARK(BM_FineStep);

void BM_FineRollout(benchmark::State& st) {
  const ControlSequence u = canonical_controls();
  for (auto _ : st) {
    benchmark::DoNotOptimize(fine_rollout(scene().start_state, u, PhysicsParams{}, scene()));
  }
}
BENCHMARK(BM_FineRollout);

void BM_Parareal(benchmark::State& st) {
  const ControlSequence u = canonical_controls();
  PararealConfig cfg;
  cfg.iterations = static_cast<int>(st.range(0));
  WorkerPool pool(std::min<std::size_t>(hardware_threads(), u.size()));
  for (auto _ : st) {
    benchmark::DoNotOptimize(parareal_predict(scene().start_state, u, cfg, PhysicsParams{},
                                              CoarseParams{}, scene(), &pool));
  }
}
BENCHMARK(BM_Parareal)->DenseRange(1, 4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
