#include "parapush/angle.hpp"

#include <cmath>

#include "parapush/errors.hpp"

namespace parapush {

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw InvalidArgument("wrap_angle: non-finite angle");
  }
  // std::remainder is exact and lands in [-pi, pi]; fold the closed bottom end up.
  double r = std::remainder(theta, kTwoPi);
  if (r <= -kPi) {
    r += kTwoPi;
  }
  return r;
}

double angle_diff(double to, double from) { return wrap_angle(to - from); }

}  // namespace parapush
