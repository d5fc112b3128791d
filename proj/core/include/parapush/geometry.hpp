// Disc-pusher vs slider contact queries, swept contact along a straight
// pusher motion, and projection of penetrating states back to the feasible set.

#pragma once

#include <optional>

#include "parapush/types.hpp"

namespace parapush {

/// Penetration below this depth (mm) counts as resting-contact noise and is
/// left alone by project_feasible.
inline constexpr double kPenetrationTolerance = 0.1;

struct ContactQuery {
  /// Positive when overlapping; negative is the clearance.
  double penetration_depth{0.0};
  /// Unit vector pointing from the pusher into the slider.
  Vec2 normal{1.0, 0.0};
  /// Closest point on the slider boundary.
  Vec2 contact_point;
};

struct SweepResult {
  double d_contact{0.0};
  double d_free{0.0};
  std::optional<Vec2> first_contact_point;
  /// Vector from the first contact point to the slider centre.
  std::optional<Vec2> r_c;
  /// Unsigned angle between the push direction and r_c.
  std::optional<double> theta_push;

  [[nodiscard]] double total() const noexcept { return d_contact + d_free; }
  /// Fraction of the sweep spent in contact; 0 for a zero-length sweep.
  [[nodiscard]] double contact_fraction() const noexcept {
    const double t = total();
    return t > 0.0 ? d_contact / t : 0.0;
  }
};

/// Disc of `pusher_radius` at `pusher_pos` against the slider. Throws
/// InvalidArgument for degenerate (non-positive) shapes.
[[nodiscard]] ContactQuery penetration(const Vec2& pusher_pos, double pusher_radius,
                                       const SliderShape& shape, const Pose2& slider_pose);

/// Nearest point on the slider boundary to `point` (world frame). Points
/// inside a box go to the nearest face.
[[nodiscard]] Vec2 closest_boundary_point(const SliderShape& shape, const Pose2& slider_pose,
                                          const Vec2& point);

/// True when the slider footprint overlaps the disc.
[[nodiscard]] bool overlaps(const SliderShape& shape, const Pose2& slider_pose,
                            const Circle& disc);

/// Sweeps the pusher along `control.vel * control.duration` with the slider
/// frozen at `slider_pose`. The pusher is considered in contact from its first
/// entry into the slider inflated by the pusher radius until the end of the
/// sweep, so d_free is the approach distance and d_contact the remainder.
[[nodiscard]] SweepResult sweep_contact(const Vec2& pusher_pos, double pusher_radius,
                                        const Control& control, const SliderShape& shape,
                                        const Pose2& slider_pose);

/// Translates the slider along the contact normal by exactly the penetration
/// depth when it exceeds `tolerance`; otherwise returns the state untouched.
/// Orientation and velocities are never modified.
[[nodiscard]] State project_feasible(const State& state, const SceneSpec& scene,
                                     double tolerance = kPenetrationTolerance);

}  // namespace parapush
