// Fine pushing model: a small-substep planar rigid-body simulator with a
// kinematic disc pusher, penalty normal contact, regularised Coulomb friction
// at the pusher contact and against the support surface.

#pragma once

#include <optional>

#include "parapush/types.hpp"

namespace parapush {

struct PhysicsParams {
  double substep{0.001};            // s
  double contact_stiffness{10.0};   // N/mm
  double contact_damping{0.05};     // N*s/mm
  /// Overrides SceneSpec::contact_friction_mu / support_friction_mu when set.
  std::optional<double> contact_friction_mu;
  std::optional<double> support_friction_mu;
  double gravity{9810.0};           // mm/s^2
  double vel_regularization{0.5};   // mm/s
  /// Lever arm of the support friction torque; defaults to the slider's mean
  /// half-extent (radius for a disc).
  std::optional<double> support_torque_length;

  friend bool operator==(const PhysicsParams&, const PhysicsParams&) = default;
};

/// Throws InvalidArgument when an invariant (substep > 0, stiffness > 0,
/// friction >= 0, ...) is violated.
void validate_physics(const PhysicsParams& params);

/// Advances the system by control.duration using duration/substep
/// semi-implicit Euler substeps. The returned pusher velocity equals
/// control.vel exactly.
///
/// Throws InvalidArgument when the duration is not an integer multiple of the
/// substep (within 1e-9 s) and SimulationUnstable naming the substep when the
/// state stops being finite.
[[nodiscard]] State fine_step(const State& state, const Control& control,
                              const PhysicsParams& params, const SceneSpec& scene);

/// Serial fine rollout; errors are rethrown as RolloutError with the step index.
[[nodiscard]] Trajectory fine_rollout(const State& state0, const ControlSequence& controls,
                                      const PhysicsParams& params, const SceneSpec& scene);

}  // namespace parapush
