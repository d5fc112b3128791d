#include "parapush/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "parapush/angle.hpp"
#include "parapush/errors.hpp"

namespace parapush {
namespace {

/// Distance from p to the segment [a, b].
double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = squared_norm(ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

double lateral_extent(const SliderShape& shape) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    return box->half_extents.y;
  }
  return std::get<DiscShape>(shape).radius;
}

double axial_extent(const SliderShape& shape) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    return box->half_extents.x;
  }
  return std::get<DiscShape>(shape).radius;
}

}  // namespace

PushKind parse_push_kind(std::string_view text) {
  if (text == "center") return PushKind::center;
  if (text == "side") return PushKind::side;
  throw InvalidArgument("unknown push '" + std::string(text) + "' (expected center or side)");
}

ShapeKind parse_shape_kind(std::string_view text) {
  if (text == "box") return ShapeKind::box;
  if (text == "disc" || text == "cylinder") return ShapeKind::disc;
  throw InvalidArgument("unknown shape '" + std::string(text) + "' (expected box or disc)");
}

SceneSpec fixture_scene(ShapeKind shape) {
  SceneSpec scene;
  if (shape == ShapeKind::box) {
    scene.slider_shape = BoxShape{kFixtureBoxHalfExtents};
  } else {
    scene.slider_shape = DiscShape{kFixtureDiscRadius};
  }
  scene.slider_mass = kFixtureSliderMass;
  scene.slider_inertia.reset();
  scene.pusher_radius = kFixturePusherRadius;
  scene.support_friction_mu = 0.35;
  scene.contact_friction_mu = 0.3;
  scene.max_push_speed = 100.0;
  scene.table_bounds = {{-300.0, -200.0}, {300.0, 200.0}};
  scene.obstacle = {{0.0, 150.0}, 40.0};
  scene.goal = {{200.0, 0.0}, 30.0};
  scene.start_state = State{};
  scene.start_state.pusher_pos = {-(axial_extent(scene.slider_shape) + scene.pusher_radius), 0.0};
  return scene;
}

SceneSpec canonical_scene(PushKind push, ShapeKind shape) {
  SceneSpec scene = fixture_scene(shape);
  const double offset =
      push == PushKind::side ? kSideOffsetFraction * lateral_extent(scene.slider_shape) : 0.0;
  scene.start_state.pusher_pos = {
      -(axial_extent(scene.slider_shape) + scene.pusher_radius + kCanonicalGap), offset};
  return scene;
}

ControlSequence canonical_controls() { return ControlSequence(4, Control{{25.0, 0.0}, 1.0}); }

std::vector<State> openloop_starts(const SceneSpec& box_scene, std::size_t count,
                                   std::uint64_t seed) {
  const auto* box = std::get_if<BoxShape>(&box_scene.slider_shape);
  if (box == nullptr) {
    throw InvalidArgument("openloop_starts: the open-loop protocol uses a box slider");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lateral(-box->half_extents.y, box->half_extents.y);
  std::vector<State> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    State s;
    s.pusher_pos = {-(box->half_extents.x + box_scene.pusher_radius), lateral(rng)};
    out.push_back(s);
  }
  return out;
}

std::vector<ControlSequence> openloop_sequences() {
  constexpr double kSpeed = 25.0;
  constexpr double kDuration = 1.5;
  std::vector<ControlSequence> out;
  for (double alpha_deg : {0.0, 15.0, -15.0}) {
    const double a = deg_to_rad(alpha_deg);
    const Vec2 v{kSpeed * std::cos(a), kSpeed * std::sin(a)};
    out.emplace_back(4, Control{v, kDuration});
  }
  return out;
}

std::vector<SceneSpec> generate_benchmark_scenes(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> heading(deg_to_rad(-20.0), deg_to_rad(20.0));
  std::uniform_real_distribution<double> reach(150.0, 180.0);
  std::uniform_real_distribution<double> lateral(-50.0, 50.0);

  std::vector<SceneSpec> out;
  out.reserve(count);
  while (out.size() < count) {
    SceneSpec scene = fixture_scene(ShapeKind::disc);
    scene.obstacle = {scene.table_bounds.center(), 40.0};
    scene.goal.radius = 30.0;
    scene.contact_friction_mu = kBenchmarkContactFriction;

    const double phi = heading(rng);
    const Vec2 start = scene.obstacle.center + rotate({-reach(rng), lateral(rng)}, phi);
    const Vec2 goal = scene.obstacle.center + rotate({reach(rng), lateral(rng)}, phi);
    const double clearance = kFixtureDiscRadius + scene.obstacle.radius;
    const double miss = segment_distance(scene.obstacle.center, start, goal);
    if (miss >= clearance || miss < kBenchmarkMinMiss * clearance) {
      continue;
    }
    scene.goal.center = goal;
    const Vec2 dir = (goal - start) * (1.0 / norm(goal - start));
    scene.start_state = State{};
    scene.start_state.slider_pose = {start.x, start.y, 0.0};
    scene.start_state.pusher_pos = start - dir * (kFixtureDiscRadius + scene.pusher_radius + 5.0);
    out.push_back(scene);
  }
  return out;
}

SceneSpec trivial_goal_scene() {
  SceneSpec scene = fixture_scene(ShapeKind::disc);
  scene.start_state.slider_pose = {scene.goal.center.x, scene.goal.center.y, 0.0};
  scene.start_state.pusher_pos = {scene.goal.center.x - (kFixtureDiscRadius + 15.0),
                                  scene.goal.center.y};
  return scene;
}

}  // namespace parapush
