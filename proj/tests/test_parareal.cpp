#include <cmath>
#include <random>
#include <tuple>

#include <gtest/gtest.h>

#include "parapush/coarse_model.hpp"
#include "parapush/errors.hpp"
#include "parapush/fine_model.hpp"
#include "parapush/geometry.hpp"
#include "parapush/parareal.hpp"
#include "parapush/scenarios.hpp"
#include "parapush/scene.hpp"
#include "parapush/worker_pool.hpp"
#include "test_util.hpp"

namespace parapush {
namespace {

PararealResult predict(const SceneSpec& scene, const ControlSequence& u, int k, bool project,
                       WorkerPool* pool = nullptr) {
  PararealConfig cfg;
  cfg.iterations = k;
  cfg.project_iterates = project;
  cfg.workers = 1;
  return parareal_predict(scene.start_state, u, cfg, PhysicsParams{}, CoarseParams{}, scene,
                          pool);
}

using Push = std::tuple<PushKind, ShapeKind>;

class CanonicalPush : public ::testing::TestWithParam<Push> {
 protected:
  SceneSpec scene() const {
    return validate_scene(canonical_scene(std::get<0>(GetParam()), std::get<1>(GetParam())));
  }
};

TEST_P(CanonicalPush, IterateZeroIsCoarse) {
  const SceneSpec s = scene();
  const PararealResult r = predict(s, canonical_controls(), 0, true);
  const Trajectory c = coarse_rollout(s.start_state, canonical_controls(), CoarseParams{}, s);
  EXPECT_EQ(r.trajectory.states, c.states);
  EXPECT_EQ(r.per_iteration.size(), 1u);
  EXPECT_EQ(r.fine_eval_count, 0u);
}

TEST_P(CanonicalPush, FullIterationsReproduceFine) {
  const SceneSpec s = scene();
  const ControlSequence u = canonical_controls();
  const Trajectory fine = fine_rollout(s.start_state, u, PhysicsParams{}, s);
  const PararealResult r = predict(s, u, static_cast<int>(u.size()), false);
  for (std::size_t n = 0; n < fine.states.size(); ++n) {
    EXPECT_LE(test::max_channel_diff(r.trajectory.states[n], fine.states[n]), 1e-9);
  }
  EXPECT_LE(test::max_report(trajectory_error(r.trajectory, fine)), 1e-9);
}

TEST_P(CanonicalPush, PrefixExactness) {
  const SceneSpec s = scene();
  const ControlSequence u = canonical_controls();
  const Trajectory fine = fine_rollout(s.start_state, u, PhysicsParams{}, s);
  for (bool project : {false, true}) {
    const PararealResult r = predict(s, u, static_cast<int>(u.size()), project);
    for (std::size_t k = 1; k < r.per_iteration.size(); ++k) {
      for (std::size_t n = 1; n <= k; ++n) {
        EXPECT_LE(test::max_channel_diff(r.per_iteration[k].states[n], fine.states[n]), 1e-9)
            << "k=" << k << " n=" << n << " project=" << project;
      }
    }
  }
}

TEST_P(CanonicalPush, ScheduleIndependence) {
  const SceneSpec s = scene();
  const ControlSequence u = canonical_controls();
  const PararealResult serial = predict(s, u, 3, true);
  for (std::size_t workers : {2u, 4u}) {
    WorkerPool pool(workers);
    const PararealResult parallel = predict(s, u, 3, true, &pool);
    ASSERT_EQ(parallel.per_iteration.size(), serial.per_iteration.size());
    for (std::size_t k = 0; k < serial.per_iteration.size(); ++k) {
      EXPECT_EQ(parallel.per_iteration[k].states, serial.per_iteration[k].states);
    }
  }
}

TEST_P(CanonicalPush, ProjectedIteratesStayWithinTolerance) {
  const SceneSpec s = scene();
  const PararealResult r = predict(s, canonical_controls(), 4, true);
  // Iterate 0 is the unprojected coarse rollout.
  for (std::size_t k = 1; k < r.per_iteration.size(); ++k) {
    for (const State& x : r.per_iteration[k].states) {
      const double d =
          penetration(x.pusher_pos, s.pusher_radius, s.slider_shape, x.slider_pose)
              .penetration_depth;
      EXPECT_LE(d, kPenetrationTolerance) << "iterate " << k;
    }
  }
}

TEST_P(CanonicalPush, ConvergenceReport) {
  const SceneSpec s = scene();
  const ControlSequence u = canonical_controls();
  PararealConfig cfg;
  cfg.project_iterates = false;
  const auto rows =
      convergence_report(s.start_state, u, 4, cfg, PhysicsParams{}, CoarseParams{}, s);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_LE(test::max_report(rows.back().error), 1e-9);
  const Trajectory fine = fine_rollout(s.start_state, u, PhysicsParams{}, s);
  const Trajectory coarse = coarse_rollout(s.start_state, u, CoarseParams{}, s);
  EXPECT_EQ(rows[0].error, trajectory_error(coarse, fine));

  const auto single =
      convergence_report(s.start_state, u, 0, cfg, PhysicsParams{}, CoarseParams{}, s);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].error, rows[0].error);
}

TEST_P(CanonicalPush, ProjectedConvergenceIsNonIncreasing) {
  const SceneSpec s = scene();
  const auto rows = convergence_report(s.start_state, canonical_controls(), 4, PararealConfig{},
                                       PhysicsParams{}, CoarseParams{}, s);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_LE(rows[k].error.trans_rms, rows[k - 1].error.trans_rms) << "k=" << k;
    EXPECT_LE(rows[k].error.rot_rms, rows[k - 1].error.rot_rms) << "k=" << k;
  }
}

INSTANTIATE_TEST_SUITE_P(
    Pushes, CanonicalPush,
    ::testing::Combine(::testing::Values(PushKind::center, PushKind::side),
                       ::testing::Values(ShapeKind::box, ShapeKind::disc)),
    [](const ::testing::TestParamInfo<Push>& info) {
      return std::string(std::get<0>(info.param) == PushKind::center ? "Center" : "Side") +
             (std::get<1>(info.param) == ShapeKind::box ? "Box" : "Disc");
    });

TEST(Parareal, CenterDiscErrorStrictlyDecreasesUntilExact) {
  const SceneSpec s = validate_scene(canonical_scene(PushKind::center, ShapeKind::disc));
  const auto rows = convergence_report(s.start_state, canonical_controls(), 4, PararealConfig{},
                                       PhysicsParams{}, CoarseParams{}, s);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k - 1].error.trans_rms > 0.0) {
      EXPECT_LT(rows[k].error.trans_rms, rows[k - 1].error.trans_rms) << "k=" << k;
    } else {
      EXPECT_EQ(rows[k].error.trans_rms, 0.0);
    }
  }
}

TEST(Parareal, RandomPushesConvergeAtFullIterations) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> offset(-25.0, 25.0);
  std::uniform_real_distribution<double> vel(-10.0, 40.0);
  const SceneSpec base = validate_scene(canonical_scene(PushKind::center, ShapeKind::box));
  for (int i = 0; i < 6; ++i) {
    SceneSpec s = base;
    s.start_state.pusher_pos.y = offset(rng);
    ControlSequence u;
    for (int n = 0; n < 4; ++n) u.push_back({{std::abs(vel(rng)) + 5.0, vel(rng) * 0.5}, 1.0});
    const Trajectory fine = fine_rollout(s.start_state, u, PhysicsParams{}, s);
    const PararealResult r = predict(s, u, 4, false);
    for (std::size_t k = 1; k < r.per_iteration.size(); ++k) {
      for (std::size_t n = 1; n <= k; ++n) {
        ASSERT_LE(test::max_channel_diff(r.per_iteration[k].states[n], fine.states[n]), 1e-9);
      }
    }
  }
}

TEST(Parareal, EvaluationCounts) {
  const SceneSpec s = validate_scene(canonical_scene(PushKind::side, ShapeKind::disc));
  for (int k = 0; k <= 4; ++k) {
    const PararealResult r = predict(s, canonical_controls(), k, true);
    EXPECT_EQ(r.fine_eval_count, static_cast<std::size_t>(k) * 4u);
    EXPECT_EQ(r.coarse_eval_count, expected_coarse_evals(4, static_cast<std::size_t>(k)));
    EXPECT_EQ(r.per_iteration.size(), static_cast<std::size_t>(k) + 1);
    EXPECT_EQ(r.trajectory.model, (ModelTag{ModelTag::Kind::parareal, k}));
  }
  EXPECT_EQ(expected_coarse_evals(4, 2), 4u + 16u);
}

TEST(Parareal, RejectsBadIterationCounts) {
  const SceneSpec s = validate_scene(canonical_scene(PushKind::center, ShapeKind::box));
  EXPECT_THROW((void)predict(s, canonical_controls(), 5, true), InvalidArgument);
  EXPECT_THROW((void)predict(s, canonical_controls(), -1, true), InvalidArgument);
  EXPECT_THROW((void)predict(s, {}, 0, true), InvalidArgument);
}

TEST(Parareal, FineFailureNamesSlice) {
  const SceneSpec s = validate_scene(canonical_scene(PushKind::center, ShapeKind::box));
  PhysicsParams p;
  p.contact_stiffness = 1e306;
  PararealConfig cfg;
  cfg.iterations = 2;
  try {
    (void)parareal_predict(s.start_state, canonical_controls(), cfg, p, CoarseParams{}, s);
    FAIL() << "expected RolloutError";
  } catch (const RolloutError& e) {
    EXPECT_GE(e.step(), 1u);
  }
}

TEST(PararealCombine, FixedPointWhenCoarseTermsAgree) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10000; ++i) {
    const State c = test::random_state(rng);
    const State f = test::random_state(rng);
    EXPECT_EQ(parareal_combine(c, f, c), f);
  }
}

TEST(PararealCombine, AnglesCombineOnTheCircle) {
  State c_new, fine, c_old;
  fine.slider_pose.theta = kPi - 0.05;
  c_old.slider_pose.theta = -kPi + 0.05;
  c_new.slider_pose.theta = -kPi + 0.15;  // +0.1 rad from c_old across the seam
  const State x = parareal_combine(c_new, fine, c_old);
  EXPECT_NEAR(x.slider_pose.theta, -kPi + 0.05, 1e-12);
}

TEST(PararealCombine, LinearChannels) {
  State c_new, fine, c_old;
  c_new.slider_pose.x = 5.0;
  c_old.slider_pose.x = 2.0;
  fine.slider_pose.x = 10.0;
  c_new.slider_vel.omega = 1.0;
  fine.slider_vel.omega = 0.5;
  EXPECT_DOUBLE_EQ(parareal_combine(c_new, fine, c_old).slider_pose.x, 13.0);
  EXPECT_DOUBLE_EQ(parareal_combine(c_new, fine, c_old).slider_vel.omega, 1.5);
}

TEST(PredictedSpeedup, Examples) {
  EXPECT_DOUBLE_EQ(predicted_speedup(0.0, 1.0, 4, 1), 4.0);
  EXPECT_NEAR(predicted_speedup(0.01, 1.0, 4, 1), 1.0 / 0.27, 1e-12);
  EXPECT_NEAR(predicted_speedup(0.01, 1.0, 4, 1), 3.7037, 1e-4);
  EXPECT_DOUBLE_EQ(predicted_speedup(0.0, 2.0, 4, 4), 1.0);
}

TEST(PredictedSpeedup, RejectsBadInputs) {
  EXPECT_THROW((void)predicted_speedup(0.0, 0.0, 4, 1), InvalidArgument);
  EXPECT_THROW((void)predicted_speedup(-1.0, 1.0, 4, 1), InvalidArgument);
  EXPECT_THROW((void)predicted_speedup(0.0, 1.0, 0, 1), InvalidArgument);
  EXPECT_THROW((void)predicted_speedup(0.0, 1.0, 4, 0), InvalidArgument);
}

TEST(WorkerPool, RunsEveryIndexOnce) {
  for (std::size_t threads : {1u, 3u}) {
    WorkerPool pool(threads);
    std::vector<int> hits(1000, 0);
    pool.parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) ASSERT_EQ(h, 1);
  }
}

TEST(WorkerPool, NestedCallsComplete) {
  WorkerPool pool(2);
  std::vector<std::vector<int>> hits(8, std::vector<int>(8, 0));
  pool.parallel_for(8, [&](std::size_t i) {
    pool.parallel_for(8, [&](std::size_t j) { hits[i][j] = 1; });
  });
  for (const auto& row : hits) {
    for (int h : row) ASSERT_EQ(h, 1);
  }
}

TEST(WorkerPool, RethrowsBodyException) {
  WorkerPool pool(2);
  EXPECT_THROW(pool.parallel_for(10,
                                 [](std::size_t i) {
                                   if (i == 7) throw std::runtime_error("boom");
                                 }),
               std::runtime_error);
}

}  // namespace
}  // namespace parapush
