// Coarse kinematic pushing model: while in contact the slider inherits the
// pusher's linear velocity, scaled by the fraction of the sweep spent in
// contact, plus a lever-arm rotation.

#pragma once

#include "parapush/types.hpp"

namespace parapush {

struct CoarseParams {
  /// Rotation gain; must be positive.
  double k_omega{1.0};

  friend bool operator==(const CoarseParams&, const CoarseParams&) = default;
};

/// One coarse step. Penetrating input states are accepted as-is; no
/// projection happens here.
[[nodiscard]] State coarse_step(const State& state, const Control& control,
                                const CoarseParams& params, const SceneSpec& scene);

[[nodiscard]] Trajectory coarse_rollout(const State& state0, const ControlSequence& controls,
                                        const CoarseParams& params, const SceneSpec& scene);

}  // namespace parapush
