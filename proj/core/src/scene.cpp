#include "parapush/scene.hpp"

#include <cmath>
#include <sstream>

#include "parapush/angle.hpp"
#include "parapush/errors.hpp"
#include "parapush/geometry.hpp"

namespace parapush {
namespace {

std::string join_issues(const std::vector<FieldIssue>& issues) {
  std::ostringstream os;
  os << "invalid scene:";
  for (const auto& issue : issues) {
    os << "\n  " << issue.field << ": " << issue.message;
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string ModelTag::to_string() const {
  switch (kind) {
    case Kind::coarse:
      return "coarse";
    case Kind::fine:
      return "fine";
    case Kind::parareal:
      return "parareal:" + std::to_string(parareal_iterations);
  }
  return "unknown";
}

double uniform_inertia(const SliderShape& shape, double mass) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    const double w = 2.0 * box->half_extents.x;
    const double h = 2.0 * box->half_extents.y;
    return mass * (w * w + h * h) / 12.0;
  }
  const double r = std::get<DiscShape>(shape).radius;
  return 0.5 * mass * r * r;
}

double slider_inertia(const SceneSpec& scene) {
  return scene.slider_inertia ? *scene.slider_inertia
                              : uniform_inertia(scene.slider_shape, scene.slider_mass);
}

bool is_finite(const State& s) noexcept {
  const double values[] = {s.pusher_pos.x,   s.pusher_pos.y,   s.slider_pose.x,
                           s.slider_pose.y,  s.slider_pose.theta, s.pusher_vel.x,
                           s.pusher_vel.y,   s.slider_vel.vx,  s.slider_vel.vy,
                           s.slider_vel.omega};
  for (double v : values) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

SceneSpec validate_scene(const SceneSpec& scene) {
  std::vector<FieldIssue> issues;
  auto require_positive = [&](const char* field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      issues.push_back({field, "must be a finite value > 0 (got " + std::to_string(value) + ")"});
    }
  };
  auto require_non_negative = [&](const char* field, double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      issues.push_back({field, "must be a finite value >= 0 (got " + std::to_string(value) + ")"});
    }
  };

  bool shape_ok = true;
  if (const auto* box = std::get_if<BoxShape>(&scene.slider_shape)) {
    const std::size_t before = issues.size();
    require_positive("slider_shape.half_extents[0]", box->half_extents.x);
    require_positive("slider_shape.half_extents[1]", box->half_extents.y);
    shape_ok = issues.size() == before;
  } else {
    const std::size_t before = issues.size();
    require_positive("slider_shape.radius", std::get<DiscShape>(scene.slider_shape).radius);
    shape_ok = issues.size() == before;
  }
  require_positive("slider_mass", scene.slider_mass);
  if (scene.slider_inertia) {
    require_positive("slider_inertia", *scene.slider_inertia);
  }
  require_positive("pusher_radius", scene.pusher_radius);
  require_non_negative("support_friction_mu", scene.support_friction_mu);
  require_non_negative("contact_friction_mu", scene.contact_friction_mu);
  require_positive("max_push_speed", scene.max_push_speed);
  require_positive("obstacle.radius", scene.obstacle.radius);
  require_positive("goal.radius", scene.goal.radius);

  const Rect& table = scene.table_bounds;
  if (!(table.max.x > table.min.x) || !(table.max.y > table.min.y)) {
    issues.push_back({"table_bounds", "max must exceed min on both axes"});
  }
  if (!is_finite(scene.start_state)) {
    issues.push_back({"start_state", "all components must be finite"});
  } else {
    if (!table.contains(scene.start_state.slider_pose.position())) {
      issues.push_back({"start_state.slider_pose", "slider must start inside table_bounds"});
    }
    const double theta = scene.start_state.slider_pose.theta;
    if (theta <= -kPi || theta > kPi) {
      issues.push_back({"start_state.slider_pose", "theta must lie in (-pi, pi]"});
    }
  }
  if (!table.contains(scene.goal.center)) {
    issues.push_back({"goal.center", "goal must lie inside table_bounds"});
  }
  if (!table.contains(scene.obstacle.center)) {
    issues.push_back({"obstacle.center", "obstacle must lie inside table_bounds"});
  }

  if (shape_ok && scene.pusher_radius > 0.0 && is_finite(scene.start_state)) {
    const ContactQuery q =
        penetration(scene.start_state.pusher_pos, scene.pusher_radius, scene.slider_shape,
                    scene.start_state.slider_pose);
    if (q.penetration_depth > kPenetrationTolerance) {
      std::ostringstream os;
      os << "pusher penetrates slider by " << q.penetration_depth << " mm (tolerance "
         << kPenetrationTolerance << " mm)";
      issues.push_back({"start_state", os.str()});
    }
  }

  if (!issues.empty()) {
    throw ValidationError(std::move(issues));
  }
  SceneSpec out = scene;
  if (!out.slider_inertia) {
    out.slider_inertia = uniform_inertia(out.slider_shape, out.slider_mass);
  }
  return out;
}

}  // namespace parapush
