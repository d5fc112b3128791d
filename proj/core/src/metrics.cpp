#include "parapush/metrics.hpp"

#include <cmath>
#include <string>

#include "parapush/angle.hpp"
#include "parapush/errors.hpp"

namespace parapush {
namespace {

struct SquaredSums {
  double trans{0.0};
  double rot{0.0};
  double vel{0.0};
  double angvel{0.0};

  void add(const State& a, const State& b, bool include_pusher) {
    trans += squared_norm(a.slider_pose.position() - b.slider_pose.position());
    vel += squared_norm(a.slider_vel.linear() - b.slider_vel.linear());
    const double dtheta = angle_diff(a.slider_pose.theta, b.slider_pose.theta);
    rot += dtheta * dtheta;
    const double domega = a.slider_vel.omega - b.slider_vel.omega;
    angvel += domega * domega;
    if (include_pusher) {
      trans += squared_norm(a.pusher_pos - b.pusher_pos);
      vel += squared_norm(a.pusher_vel - b.pusher_vel);
    }
  }

  [[nodiscard]] ErrorReport rms(double count) const {
    if (count <= 0.0) {
      return {};
    }
    return ErrorReport{
        std::sqrt(trans / count),
        rad_to_deg(std::sqrt(rot / count)),
        std::sqrt(vel / count),
        rad_to_deg(std::sqrt(angvel / count)),
    };
  }
};

}  // namespace

ErrorReport trajectory_error(const Trajectory& a, const Trajectory& b,
                             const ErrorOptions& options) {
  if (a.states.size() != b.states.size()) {
    throw InvalidArgument("trajectory_error: length mismatch (" +
                          std::to_string(a.states.size()) + " vs " +
                          std::to_string(b.states.size()) + ")");
  }
  SquaredSums sums;
  for (std::size_t n = 1; n < a.states.size(); ++n) {
    sums.add(a.states[n], b.states[n], options.include_pusher);
  }
  return sums.rms(static_cast<double>(a.states.size()) - 1.0);
}

ErrorReport state_error(const State& a, const State& b, const ErrorOptions& options) {
  SquaredSums sums;
  sums.add(a, b, options.include_pusher);
  return sums.rms(1.0);
}

}  // namespace parapush
