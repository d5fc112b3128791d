// Fixture scenes and control sequences for the experiment runners.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "parapush/types.hpp"

namespace parapush {

enum class PushKind { center, side };
enum class ShapeKind { box, disc };

[[nodiscard]] PushKind parse_push_kind(std::string_view text);
[[nodiscard]] ShapeKind parse_shape_kind(std::string_view text);

/// Fixture dimensions (mm, kg).
inline constexpr Vec2 kFixtureBoxHalfExtents{50.0, 30.0};
inline constexpr double kFixtureDiscRadius = 40.0;
inline constexpr double kFixturePusherRadius = 10.0;
inline constexpr double kFixtureSliderMass = 0.2;
/// Approach gap between pusher and slider in the canonical pushes.
inline constexpr double kCanonicalGap = 25.0;
/// Pusher offset from the push axis in side pushes, as a fraction of the
/// slider's lateral half-extent.
inline constexpr double kSideOffsetFraction = 0.5;

/// Base scene: fixture slider of the given shape at the origin of a
/// 600x400 mm table, pusher radius 10 mm, obstacle at the table centre.
[[nodiscard]] SceneSpec fixture_scene(ShapeKind shape);

/// One of the four canonical pushes: slider at the origin, pusher
/// kCanonicalGap behind it on the -x side, centred or offset sideways.
[[nodiscard]] SceneSpec canonical_scene(PushKind push, ShapeKind shape);

/// {[25, 0]} x 4 at 1 s per control: a 100 mm push along +x.
[[nodiscard]] ControlSequence canonical_controls();

/// Open-loop protocol: pusher touching the back face of the fixture box at a
/// lateral offset drawn uniformly within the slider's edges.
[[nodiscard]] std::vector<State> openloop_starts(const SceneSpec& box_scene, std::size_t count,
                                                 std::uint64_t seed);

/// Three 4-step sequences at 25 mm/s and 1.5 s per control heading 0, +15 and
/// -15 degrees off the push axis.
[[nodiscard]] std::vector<ControlSequence> openloop_sequences();

/// Smallest distance between the obstacle centre and the straight start-goal
/// line in generated scenes, as a fraction of the slider-obstacle contact
/// distance. Every generated line is blocked, but not through the centre.
inline constexpr double kBenchmarkMinMiss = 0.5;

/// Pusher-slider friction in generated scenes.
inline constexpr double kBenchmarkContactFriction = 0.8;

/// Obstacle-avoidance scenes: disc slider, obstacle at the table centre, start
/// and goal on opposite sides with the straight line between them blocked.
[[nodiscard]] std::vector<SceneSpec> generate_benchmark_scenes(std::size_t count,
                                                               std::uint64_t seed);

/// Start state whose slider already sits on the goal.
[[nodiscard]] SceneSpec trivial_goal_scene();

}  // namespace parapush
