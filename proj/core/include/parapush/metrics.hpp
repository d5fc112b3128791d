#pragma once

#include "parapush/types.hpp"

namespace parapush {

struct ErrorOptions {
  /// Fold pusher position/velocity into the translation and velocity channels.
  bool include_pusher{false};
};

/// Per-channel RMS over time points 1..N; state 0 is excluded because rollouts
/// from the same initial state always share it. Rotation differences are
/// wrapped to the shortest signed distance before squaring.
///
/// Throws InvalidArgument when the trajectories differ in length.
[[nodiscard]] ErrorReport trajectory_error(const Trajectory& a, const Trajectory& b,
                                           const ErrorOptions& options = {});

/// Channel-wise difference between two individual states, reported in the
/// same units as ErrorReport (single-point "RMS").
[[nodiscard]] ErrorReport state_error(const State& a, const State& b,
                                      const ErrorOptions& options = {});

}  // namespace parapush
