#include "parapush/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parapush/errors.hpp"

namespace parapush {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kChordTolerance = 1e-9;  // mm

void check_shape(const SliderShape& shape) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    if (!(box->half_extents.x > 0.0) || !(box->half_extents.y > 0.0)) {
      throw InvalidArgument("box slider needs positive half extents");
    }
  } else if (!(std::get<DiscShape>(shape).radius > 0.0)) {
    throw InvalidArgument("disc slider needs a positive radius");
  }
}

/// Slider frame with its rotation evaluated once.
struct Frame {
  explicit Frame(const Pose2& pose)
      : origin(pose.position()), c(std::cos(pose.theta)), s(std::sin(pose.theta)) {}

  [[nodiscard]] Vec2 rotate_in(const Vec2& v) const noexcept {
    return {c * v.x + s * v.y, -s * v.x + c * v.y};
  }
  [[nodiscard]] Vec2 rotate_out(const Vec2& v) const noexcept {
    return {c * v.x - s * v.y, s * v.x + c * v.y};
  }
  [[nodiscard]] Vec2 to_local(const Vec2& world) const noexcept { return rotate_in(world - origin); }
  [[nodiscard]] Vec2 to_world(const Vec2& local) const noexcept {
    return origin + rotate_out(local);
  }

  Vec2 origin;
  double c;
  double s;
};

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

/// Closest point on the box boundary in the box frame. `face_normal` gets
/// the outward face normal when the point is inside (max-axis rule).
struct BoxClosest {
  Vec2 point;
  bool inside{false};
  double inside_gap{0.0};
  Vec2 face_normal;
};

BoxClosest box_closest_local(const Vec2& he, const Vec2& local) {
  const double ax = std::abs(local.x);
  const double ay = std::abs(local.y);
  BoxClosest out;
  if (ax <= he.x && ay <= he.y) {
    out.inside = true;
    const double gap_x = he.x - ax;
    const double gap_y = he.y - ay;
    if (gap_x <= gap_y) {
      out.point = {sign_of(local.x) * he.x, local.y};
      out.face_normal = {sign_of(local.x), 0.0};
      out.inside_gap = gap_x;
    } else {
      out.point = {local.x, sign_of(local.y) * he.y};
      out.face_normal = {0.0, sign_of(local.y)};
      out.inside_gap = gap_y;
    }
    return out;
  }
  out.point = {std::clamp(local.x, -he.x, he.x), std::clamp(local.y, -he.y, he.y)};
  return out;
}

struct Interval {
  double lo{kInf};
  double hi{-kInf};

  [[nodiscard]] bool empty() const noexcept { return !(lo <= hi); }
  void merge(const Interval& o) noexcept {
    if (o.empty()) {
      return;
    }
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
  }
};

/// Parameter range of a + t*d inside |x| <= ext along one axis.
Interval slab(double a, double d, double ext) {
  if (d == 0.0) {
    // Grazing along the slab edge does not count as entering it.
    return std::abs(a) < ext ? Interval{-kInf, kInf} : Interval{};
  }
  double t0 = (-ext - a) / d;
  double t1 = (ext - a) / d;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  return {t0, t1};
}

Interval rect_interval(const Vec2& a, const Vec2& d, const Vec2& ext) {
  const Interval ix = slab(a.x, d.x, ext.x);
  const Interval iy = slab(a.y, d.y, ext.y);
  return {std::max(ix.lo, iy.lo), std::min(ix.hi, iy.hi)};
}

/// Parameter range of a + t*d inside the disc |x - c| <= r; d must be non-zero.
Interval disc_interval(const Vec2& a, const Vec2& d, const Vec2& c, double r) {
  const Vec2 f = a - c;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - r * r;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0) {
    return {};
  }
  const double root = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double q = -0.5 * (qb + (qb >= 0.0 ? root : -root));
  double t0 = q / qa;
  double t1 = q != 0.0 ? qc / q : -t0;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  return {t0, t1};
}

/// Interval of the infinite line a + t*d inside the slider inflated by r.
Interval inflated_interval(const SliderShape& shape, double r, const Vec2& a, const Vec2& d) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    const Vec2 he = box->half_extents;
    Interval out;
    out.merge(rect_interval(a, d, {he.x + r, he.y}));
    out.merge(rect_interval(a, d, {he.x, he.y + r}));
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        out.merge(disc_interval(a, d, {sx * he.x, sy * he.y}, r));
      }
    }
    return out;
  }
  const double radius = std::get<DiscShape>(shape).radius + r;
  return disc_interval(a, d, {0.0, 0.0}, radius);
}

}  // namespace

ContactQuery penetration(const Vec2& pusher_pos, double pusher_radius, const SliderShape& shape,
                         const Pose2& slider_pose) {
  check_shape(shape);
  ContactQuery q;
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    const Frame frame(slider_pose);
    const Vec2 local = frame.to_local(pusher_pos);
    const BoxClosest closest = box_closest_local(box->half_extents, local);
    Vec2 normal_local;
    if (closest.inside) {
      // Pushing the slider against the face normal clears the nearest face.
      normal_local = -closest.face_normal;
      q.penetration_depth = pusher_radius + closest.inside_gap;
    } else {
      const Vec2 diff = closest.point - local;
      const double dist = norm(diff);
      normal_local = diff * (1.0 / dist);
      q.penetration_depth = pusher_radius - dist;
    }
    q.normal = frame.rotate_out(normal_local);
    q.contact_point = frame.to_world(closest.point);
    return q;
  }

  const double slider_radius = std::get<DiscShape>(shape).radius;
  const Vec2 diff = slider_pose.position() - pusher_pos;
  const double dist = norm(diff);
  q.normal = dist > 0.0 ? diff * (1.0 / dist) : Vec2{1.0, 0.0};
  q.penetration_depth = pusher_radius + slider_radius - dist;
  q.contact_point = slider_pose.position() - q.normal * slider_radius;
  return q;
}

Vec2 closest_boundary_point(const SliderShape& shape, const Pose2& slider_pose,
                            const Vec2& point) {
  check_shape(shape);
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    const Frame frame(slider_pose);
    return frame.to_world(box_closest_local(box->half_extents, frame.to_local(point)).point);
  }
  const double radius = std::get<DiscShape>(shape).radius;
  const Vec2 diff = point - slider_pose.position();
  const double dist = norm(diff);
  const Vec2 dir = dist > 0.0 ? diff * (1.0 / dist) : Vec2{-1.0, 0.0};
  return slider_pose.position() + dir * radius;
}

bool overlaps(const SliderShape& shape, const Pose2& slider_pose, const Circle& disc) {
  return penetration(disc.center, disc.radius, shape, slider_pose).penetration_depth > 0.0;
}

SweepResult sweep_contact(const Vec2& pusher_pos, double pusher_radius, const Control& control,
                          const SliderShape& shape, const Pose2& slider_pose) {
  check_shape(shape);
  const Vec2 motion = control.vel * control.duration;
  const double length = norm(motion);
  SweepResult out;
  if (!(length > 0.0)) {
    return out;
  }

  const Frame frame(slider_pose);
  const Vec2 a = frame.to_local(pusher_pos);
  const Vec2 d = frame.rotate_in(motion);
  const Interval line = inflated_interval(shape, pusher_radius, a, d);
  if (line.empty() || (line.hi - line.lo) * length <= kChordTolerance) {
    out.d_free = length;
    return out;
  }
  const double t_in = std::max(line.lo, 0.0);
  const double t_out = std::min(line.hi, 1.0);
  if (t_in > t_out || t_in >= 1.0) {
    out.d_free = length;
    return out;
  }

  out.d_free = t_in * length;
  out.d_contact = length - out.d_free;
  if (!(out.d_contact > 0.0)) {
    out.d_contact = 0.0;
    out.d_free = length;
    return out;
  }
  const Vec2 entry = pusher_pos + motion * t_in;
  const Vec2 contact = closest_boundary_point(shape, slider_pose, entry);
  const Vec2 r_c = slider_pose.position() - contact;
  out.first_contact_point = contact;
  out.r_c = r_c;
  const double rn = norm(r_c);
  const double vn = norm(control.vel);
  double angle = 0.0;
  if (rn > 0.0 && vn > 0.0) {
    angle = std::acos(std::clamp(dot(control.vel, r_c) / (rn * vn), -1.0, 1.0));
  }
  out.theta_push = angle;
  return out;
}

State project_feasible(const State& state, const SceneSpec& scene, double tolerance) {
  const ContactQuery q = penetration(state.pusher_pos, scene.pusher_radius, scene.slider_shape,
                                     state.slider_pose);
  if (!(q.penetration_depth > tolerance)) {
    return state;
  }
  State out = state;
  out.slider_pose.x += q.normal.x * q.penetration_depth;
  out.slider_pose.y += q.normal.y * q.penetration_depth;
  return out;
}

}  // namespace parapush
