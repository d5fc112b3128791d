#include "parapush/coarse_model.hpp"

#include <cmath>

#include "parapush/angle.hpp"
#include "parapush/errors.hpp"
#include "parapush/geometry.hpp"

namespace parapush {
namespace {

constexpr double kDegenerateLever = 1e-6;  // mm

}  // namespace

State coarse_step(const State& state, const Control& control, const CoarseParams& params,
                  const SceneSpec& scene) {
  if (!(params.k_omega > 0.0)) {
    throw InvalidArgument("coarse.k_omega must be > 0");
  }
  const double dt = control.duration;
  const Vec2 u = control.vel;
  const SweepResult sweep =
      sweep_contact(state.pusher_pos, scene.pusher_radius, control, scene.slider_shape,
                    state.slider_pose);
  const double p_c = sweep.contact_fraction();

  State out = state;
  out.pusher_pos = state.pusher_pos + u * dt;
  out.pusher_vel = u;
  if (!(p_c > 0.0)) {
    return out;
  }

  double omega = 0.0;
  const Vec2 r_c = *sweep.r_c;
  const double lever = norm(r_c);
  if (lever >= kDegenerateLever) {
    const double magnitude = params.k_omega * norm(u) * std::sin(*sweep.theta_push) / lever;
    // Direction of the torque a force along u at the contact exerts about the centre.
    const double turn = cross(u, r_c);
    omega = turn > 0.0 ? magnitude : (turn < 0.0 ? -magnitude : 0.0);
  }

  out.slider_pose.x += u.x * p_c * dt;
  out.slider_pose.y += u.y * p_c * dt;
  out.slider_pose.theta = wrap_angle(state.slider_pose.theta + omega * p_c * dt);
  out.slider_vel = {u.x, u.y, omega};
  return out;
}

Trajectory coarse_rollout(const State& state0, const ControlSequence& controls,
                          const CoarseParams& params, const SceneSpec& scene) {
  Trajectory traj;
  traj.model = {ModelTag::Kind::coarse, 0};
  traj.controls = controls;
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(state0);
  for (const Control& c : controls) {
    traj.states.push_back(coarse_step(traj.states.back(), c, params, scene));
  }
  return traj;
}

}  // namespace parapush
