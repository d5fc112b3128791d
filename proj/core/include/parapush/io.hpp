// Scene JSON documents and CSV exports.
//
// A scene document is one JSON object: the SceneSpec fields at the top level
// (snake_case, exactly as named in SceneSpec) plus optional blocks `physics`,
// `coarse`, `parareal`, `cost`, `optimizer` and `mpc`.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "parapush/coarse_model.hpp"
#include "parapush/fine_model.hpp"
#include "parapush/mpc.hpp"
#include "parapush/optimizer.hpp"
#include "parapush/parareal.hpp"
#include "parapush/types.hpp"

namespace parapush {

struct SceneDocument {
  SceneSpec scene;
  PhysicsParams physics;
  CoarseParams coarse;
  PararealConfig parareal;
  CostWeights cost;
  OptimizerConfig optimizer;
  MPCConfig mpc;

  friend bool operator==(const SceneDocument&, const SceneDocument&) = default;
};

/// Parses a scene document. Missing required fields and wrongly typed values
/// raise ValidationError naming the field; the scene itself is not validated.
[[nodiscard]] SceneDocument parse_scene_document(const std::string& json_text);
[[nodiscard]] SceneDocument load_scene_document(const std::string& path);

[[nodiscard]] std::string to_json(const SceneDocument& document, int indent = 2);
void save_scene_document(const SceneDocument& document, const std::string& path);

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);

inline constexpr const char* kTrajectoryCsvHeader =
    "step,t,pusher_x,pusher_y,slider_x,slider_y,slider_theta,pusher_vx,pusher_vy,slider_vx,"
    "slider_vy,slider_omega";
inline constexpr const char* kConvergenceCsvHeader = "k,trans_rms,rot_rms,vel_rms,angvel_rms";

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory);

/// Reads the states back from a trajectory CSV (controls are not stored).
[[nodiscard]] std::vector<State> read_trajectory_csv(const std::string& path);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceEntry>& entries);

/// Parses "vx,vy;vx,vy;..." into controls of the given duration.
[[nodiscard]] ControlSequence parse_controls(const std::string& text, double duration);

}  // namespace parapush
