#pragma once

#include "parapush/types.hpp"

namespace parapush {

/// Uniform-density moment of inertia about the centroid, kg*mm^2.
[[nodiscard]] double uniform_inertia(const SliderShape& shape, double mass);

/// Effective slider inertia: the configured value, or the uniform-density one.
[[nodiscard]] double slider_inertia(const SceneSpec& scene);

/// Returns the scene with slider_inertia filled in. Throws ValidationError
/// listing every violated invariant (field name + message); a penetrating
/// start state reports its penetration depth.
[[nodiscard]] SceneSpec validate_scene(const SceneSpec& scene);

/// True when every component of the state is finite.
[[nodiscard]] bool is_finite(const State& state) noexcept;

}  // namespace parapush
