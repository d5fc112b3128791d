// Uniform rollout entry point over the three predictor families.

#pragma once

#include <string_view>

#include "parapush/coarse_model.hpp"
#include "parapush/fine_model.hpp"
#include "parapush/parareal.hpp"
#include "parapush/types.hpp"

namespace parapush {

class WorkerPool;

/// Which predictor a planner or experiment rolls out with.
using ModelChoice = ModelTag;

inline constexpr ModelChoice kCoarseModel{ModelTag::Kind::coarse, 0};
inline constexpr ModelChoice kFineModel{ModelTag::Kind::fine, 0};
[[nodiscard]] constexpr ModelChoice parareal_model(int k) noexcept {
  return {ModelTag::Kind::parareal, k};
}

/// Parses "coarse", "fine" or "parareal:K". Throws InvalidArgument otherwise.
[[nodiscard]] ModelChoice parse_model(std::string_view text);

/// Everything a rollout needs besides the initial state and controls.
struct ModelContext {
  SceneSpec scene;
  PhysicsParams physics;
  CoarseParams coarse;
  /// Only `workers` and `project_iterates` are used; K comes from the choice.
  PararealConfig parareal;
  WorkerPool* pool{nullptr};
};

/// Rolls `controls` out from `state0` with the chosen predictor.
[[nodiscard]] Trajectory rollout(const ModelChoice& model, const State& state0,
                                 const ControlSequence& controls, const ModelContext& context);

}  // namespace parapush
