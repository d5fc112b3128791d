#include "parapush/fine_model.hpp"

#include <cmath>
#include <string>

#include "parapush/angle.hpp"
#include "parapush/errors.hpp"
#include "parapush/geometry.hpp"
#include "parapush/scene.hpp"

namespace parapush {
namespace {

// Parameters are quoted in N; internal forces are kg*mm/s^2.
constexpr double kNewton = 1000.0;

/// Regularised Coulomb friction applied implicitly over one substep: the
/// velocity-like quantity `s` loses at most `budget`, and below `s_reg` the
/// friction acts as a viscous drag solved implicitly. Never reverses sign.
double dissipate(double s, double budget, double s_reg) {
  const double mag = std::abs(s);
  if (mag == 0.0 || budget <= 0.0) {
    return s;
  }
  double out;
  if (mag - budget >= s_reg) {
    out = mag - budget;
  } else {
    out = mag / (1.0 + budget / s_reg);
  }
  return s > 0.0 ? out : -out;
}

struct Constants {
  double h;
  long substeps;
  double mass;
  double inertia;
  double stiffness;
  double damping;
  double mu_contact;
  double mu_support;
  double gravity;
  double v_reg;
  double torque_length;
};

double default_torque_length(const SliderShape& shape) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    return 0.5 * (box->half_extents.x + box->half_extents.y);
  }
  return std::get<DiscShape>(shape).radius;
}

Constants make_constants(const Control& control, const PhysicsParams& params,
                         const SceneSpec& scene) {
  validate_physics(params);
  if (!(control.duration > 0.0) || !std::isfinite(control.duration)) {
    throw InvalidArgument("fine_step: control duration must be positive");
  }
  const double ratio = control.duration / params.substep;
  const long substeps = std::lround(ratio);
  if (substeps < 1 ||
      std::abs(static_cast<double>(substeps) * params.substep - control.duration) > 1e-9) {
    throw InvalidArgument("fine_step: duration " + std::to_string(control.duration) +
                          " s is not an integer multiple of the substep " +
                          std::to_string(params.substep) + " s");
  }
  return Constants{
      params.substep,
      substeps,
      scene.slider_mass,
      slider_inertia(scene),
      params.contact_stiffness * kNewton,
      params.contact_damping * kNewton,
      params.contact_friction_mu.value_or(scene.contact_friction_mu),
      params.support_friction_mu.value_or(scene.support_friction_mu),
      params.gravity,
      params.vel_regularization,
      params.support_torque_length.value_or(default_torque_length(scene.slider_shape)),
  };
}

}  // namespace

void validate_physics(const PhysicsParams& p) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  auto non_negative = [](double v) { return v >= 0.0 && std::isfinite(v); };
  if (!positive(p.substep)) throw InvalidArgument("physics.substep must be > 0");
  if (!positive(p.contact_stiffness)) throw InvalidArgument("physics.contact_stiffness must be > 0");
  if (!non_negative(p.contact_damping)) throw InvalidArgument("physics.contact_damping must be >= 0");
  if (p.contact_friction_mu && !non_negative(*p.contact_friction_mu)) {
    throw InvalidArgument("physics.contact_friction_mu must be >= 0");
  }
  if (p.support_friction_mu && !non_negative(*p.support_friction_mu)) {
    throw InvalidArgument("physics.support_friction_mu must be >= 0");
  }
  if (!non_negative(p.gravity)) throw InvalidArgument("physics.gravity must be >= 0");
  if (!positive(p.vel_regularization)) throw InvalidArgument("physics.vel_regularization must be > 0");
  if (p.support_torque_length && !positive(*p.support_torque_length)) {
    throw InvalidArgument("physics.support_torque_length must be > 0");
  }
}

State fine_step(const State& state, const Control& control, const PhysicsParams& params,
                const SceneSpec& scene) {
  const Constants k = make_constants(control, params, scene);
  const Vec2 u = control.vel;
  const double inv_m = 1.0 / k.mass;
  const double inv_i = 1.0 / k.inertia;
  const double support_budget = k.mu_support * k.gravity * k.h;
  const double torque_budget = k.mu_support * k.mass * k.gravity * k.torque_length * k.h * inv_i;
  const double omega_reg = k.v_reg / k.torque_length;

  const Vec2 pusher0 = state.pusher_pos;
  Pose2 pose = state.slider_pose;
  Vec2 v = state.slider_vel.linear();
  double w = state.slider_vel.omega;

  for (long i = 0; i < k.substeps; ++i) {
    // Positions are taken from the start point, not accumulated, so the end
    // point matches the coarse model's p0 + u*dt.
    const Vec2 pusher = pusher0 + u * (k.h * static_cast<double>(i + 1));

    const ContactQuery q = penetration(pusher, scene.pusher_radius, scene.slider_shape, pose);
    if (q.penetration_depth > 0.0) {
      const Vec2 n = q.normal;
      const Vec2 r = q.contact_point - pose.position();
      const Vec2 v_rel = v + perp(r) * w - u;
      const double approach = -dot(v_rel, n);
      const double fn = std::max(0.0, k.stiffness * q.penetration_depth + k.damping * approach);
      const double jn = fn * k.h;
      if (!std::isfinite(jn)) {
        throw SimulationUnstable(static_cast<std::size_t>(i), "non-finite contact force");
      }
      v += n * (jn * inv_m);
      w += cross(r, n) * jn * inv_i;

      if (k.mu_contact > 0.0 && jn > 0.0) {
        const Vec2 t = perp(n);
        const double rt = cross(r, t);
        const double inv_eff = inv_m + rt * rt * inv_i;
        const double slip = dot(v + perp(r) * w - u, t);
        const double slip_after = dissipate(slip, k.mu_contact * jn * inv_eff, k.v_reg);
        const double jt = (slip_after - slip) / inv_eff;
        v += t * (jt * inv_m);
        w += rt * jt * inv_i;
      }
    }

    const double speed = norm(v);
    if (speed > 0.0) {
      v *= dissipate(speed, support_budget, k.v_reg) / speed;
    }
    w = dissipate(w, torque_budget, omega_reg);

    pose.x += v.x * k.h;
    pose.y += v.y * k.h;
    pose.theta += w * k.h;
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta)) {
      throw SimulationUnstable(static_cast<std::size_t>(i), "non-finite slider state");
    }
    pose.theta = wrap_angle(pose.theta);
  }

  State out;
  out.pusher_pos = pusher0 + u * control.duration;
  out.pusher_vel = u;
  out.slider_pose = pose;
  out.slider_vel = {v.x, v.y, w};
  return out;
}

Trajectory fine_rollout(const State& state0, const ControlSequence& controls,
                        const PhysicsParams& params, const SceneSpec& scene) {
  Trajectory traj;
  traj.model = {ModelTag::Kind::fine, 0};
  traj.controls = controls;
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(state0);
  for (std::size_t n = 0; n < controls.size(); ++n) {
    try {
      traj.states.push_back(fine_step(traj.states.back(), controls[n], params, scene));
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception& e) {
      throw RolloutError(n, e.what());
    }
  }
  return traj;
}

}  // namespace parapush
