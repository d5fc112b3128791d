// Domain types shared by every parapush module.
//
// Units: millimetres, seconds, radians, kilograms. Degrees appear only in
// reports and CLI output.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace parapush {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2& operator+=(const Vec2& o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) noexcept { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

[[nodiscard]] constexpr double dot(const Vec2& a, const Vec2& b) noexcept {
  return a.x * b.x + a.y * b.y;
}
/// z-component of the 3D cross product of two planar vectors.
[[nodiscard]] constexpr double cross(const Vec2& a, const Vec2& b) noexcept {
  return a.x * b.y - a.y * b.x;
}
[[nodiscard]] inline double norm(const Vec2& a) noexcept { return std::hypot(a.x, a.y); }
[[nodiscard]] constexpr double squared_norm(const Vec2& a) noexcept { return dot(a, a); }
/// Counter-clockwise perpendicular.
[[nodiscard]] constexpr Vec2 perp(const Vec2& a) noexcept { return {-a.y, a.x}; }

/// Rotate `v` by `theta` radians counter-clockwise.
[[nodiscard]] inline Vec2 rotate(const Vec2& v, double theta) noexcept {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Planar pose; theta is kept in (-pi, pi].
struct Pose2 {
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  [[nodiscard]] constexpr Vec2 position() const noexcept { return {x, y}; }
  friend constexpr bool operator==(const Pose2&, const Pose2&) = default;
};

struct Twist2 {
  double vx{0.0};
  double vy{0.0};
  double omega{0.0};

  [[nodiscard]] constexpr Vec2 linear() const noexcept { return {vx, vy}; }
  friend constexpr bool operator==(const Twist2&, const Twist2&) = default;
};

/// Full pusher + slider configuration and velocities at one time point.
struct State {
  Vec2 pusher_pos;
  Pose2 slider_pose;
  Vec2 pusher_vel;
  Twist2 slider_vel;

  friend constexpr bool operator==(const State&, const State&) = default;
};

/// Commanded pusher velocity held for `duration` seconds.
struct Control {
  Vec2 vel;
  double duration{1.0};

  friend constexpr bool operator==(const Control&, const Control&) = default;
};

using ControlSequence = std::vector<Control>;

struct BoxShape {
  Vec2 half_extents;
  friend constexpr bool operator==(const BoxShape&, const BoxShape&) = default;
};

struct DiscShape {
  double radius{0.0};
  friend constexpr bool operator==(const DiscShape&, const DiscShape&) = default;
};

using SliderShape = std::variant<BoxShape, DiscShape>;

struct Circle {
  Vec2 center;
  double radius{0.0};
  friend constexpr bool operator==(const Circle&, const Circle&) = default;
};

/// Axis-aligned rectangle.
struct Rect {
  Vec2 min;
  Vec2 max;

  [[nodiscard]] constexpr bool contains(const Vec2& p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  [[nodiscard]] constexpr Vec2 center() const noexcept {
    return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)};
  }
  friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

struct SceneSpec {
  SliderShape slider_shape{BoxShape{{50.0, 30.0}}};
  double slider_mass{0.2};                 // kg
  std::optional<double> slider_inertia;    // kg*mm^2, about the centroid
  double pusher_radius{10.0};
  double support_friction_mu{0.35};
  double contact_friction_mu{0.3};
  double max_push_speed{100.0};            // mm/s
  Rect table_bounds{{-300.0, -200.0}, {300.0, 200.0}};
  Circle obstacle{{0.0, 0.0}, 40.0};
  Circle goal{{200.0, 0.0}, 30.0};
  State start_state;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

/// Which predictor produced a trajectory. `parareal_iterations` is only
/// meaningful for Kind::parareal.
struct ModelTag {
  enum class Kind { coarse, fine, parareal };
  Kind kind{Kind::coarse};
  int parareal_iterations{0};

  [[nodiscard]] std::string to_string() const;
  friend constexpr bool operator==(const ModelTag&, const ModelTag&) = default;
};

struct Trajectory {
  std::vector<State> states;
  ModelTag model;
  /// The controls the trajectory was rolled out with; states.size() ==
  /// controls.size() + 1.
  ControlSequence controls;

  [[nodiscard]] std::size_t steps() const noexcept { return controls.size(); }
};

/// Per-channel RMS differences between two trajectories.
struct ErrorReport {
  double trans_rms{0.0};   // mm
  double rot_rms{0.0};     // degrees
  double vel_rms{0.0};     // mm/s
  double angvel_rms{0.0};  // deg/s

  friend constexpr bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

}  // namespace parapush
