#pragma once

#include <numbers>

namespace parapush {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps a finite angle to (-pi, pi]. Throws InvalidArgument on NaN/Inf.
[[nodiscard]] double wrap_angle(double theta);

/// Shortest signed angular distance `to - from`, in (-pi, pi].
[[nodiscard]] double angle_diff(double to, double from);

[[nodiscard]] constexpr double rad_to_deg(double rad) noexcept { return rad * (180.0 / kPi); }
[[nodiscard]] constexpr double deg_to_rad(double deg) noexcept { return deg * (kPi / 180.0); }

}  // namespace parapush
