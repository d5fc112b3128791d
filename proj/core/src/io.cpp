#include "parapush/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include "parapush/errors.hpp"

namespace parapush {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw ValidationError({{field, message}});
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    field_error(path + key, "required field is missing");
  }
  return j.at(key);
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) {
    field_error(field, "expected a number");
  }
  return j.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  return j.contains(key) ? as_number(j.at(key), path + key) : fallback;
}

int int_or(const json& j, const std::string& key, int fallback, const std::string& path) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number_integer()) {
    field_error(path + key, "expected an integer");
  }
  return j.at(key).get<int>();
}

bool bool_or(const json& j, const std::string& key, bool fallback, const std::string& path) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_boolean()) {
    field_error(path + key, "expected true or false");
  }
  return j.at(key).get<bool>();
}

std::vector<double> as_array(const json& j, std::size_t size, const std::string& field) {
  if (!j.is_array() || j.size() != size) {
    field_error(field, "expected an array of " + std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Vec2 as_vec2(const json& j, const std::string& field) {
  const auto v = as_array(j, 2, field);
  return {v[0], v[1]};
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }

Circle parse_circle(const json& j, const std::string& field) {
  return {as_vec2(require(j, "center", field + "."), field + ".center"),
          as_number(require(j, "radius", field + "."), field + ".radius")};
}

json circle_json(const Circle& c) { return {{"center", vec2_json(c.center)}, {"radius", c.radius}}; }

SliderShape parse_shape(const json& j) {
  const std::string field = "slider_shape";
  const json& type = require(j, "type", field + ".");
  if (type == "box") {
    return BoxShape{as_vec2(require(j, "half_extents", field + "."), field + ".half_extents")};
  }
  if (type == "disc") {
    return DiscShape{as_number(require(j, "radius", field + "."), field + ".radius")};
  }
  field_error(field + ".type", "expected \"box\" or \"disc\"");
}

json shape_json(const SliderShape& shape) {
  if (const auto* box = std::get_if<BoxShape>(&shape)) {
    return {{"type", "box"}, {"half_extents", vec2_json(box->half_extents)}};
  }
  return {{"type", "disc"}, {"radius", std::get<DiscShape>(shape).radius}};
}

State parse_state(const json& j, const std::string& field) {
  State s;
  s.pusher_pos = as_vec2(require(j, "pusher_pos", field + "."), field + ".pusher_pos");
  const auto pose = as_array(require(j, "slider_pose", field + "."), 3, field + ".slider_pose");
  s.slider_pose = {pose[0], pose[1], pose[2]};
  if (j.contains("pusher_vel")) {
    s.pusher_vel = as_vec2(j.at("pusher_vel"), field + ".pusher_vel");
  }
  if (j.contains("slider_vel")) {
    const auto v = as_array(j.at("slider_vel"), 3, field + ".slider_vel");
    s.slider_vel = {v[0], v[1], v[2]};
  }
  return s;
}

json state_json(const State& s) {
  return {{"pusher_pos", vec2_json(s.pusher_pos)},
          {"slider_pose", json::array({s.slider_pose.x, s.slider_pose.y, s.slider_pose.theta})},
          {"pusher_vel", vec2_json(s.pusher_vel)},
          {"slider_vel",
           json::array({s.slider_vel.vx, s.slider_vel.vy, s.slider_vel.omega})}};
}

std::optional<double> optional_number(const json& j, const std::string& key,
                                      const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return as_number(j.at(key), path + key);
}

const json& block(const json& root, const char* key) {
  static const json empty = json::object();
  if (!root.contains(key)) {
    return empty;
  }
  const json& b = root.at(key);
  if (!b.is_object()) {
    field_error(key, "expected an object");
  }
  return b;
}

}  // namespace

SceneDocument parse_scene_document(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    field_error("<document>", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) {
    field_error("<document>", "expected a JSON object");
  }

  SceneDocument doc;
  SceneSpec& s = doc.scene;
  s.slider_shape = parse_shape(require(root, "slider_shape", ""));
  s.slider_mass = as_number(require(root, "slider_mass", ""), "slider_mass");
  s.slider_inertia = optional_number(root, "slider_inertia", "");
  s.pusher_radius = as_number(require(root, "pusher_radius", ""), "pusher_radius");
  s.support_friction_mu = number_or(root, "support_friction_mu", s.support_friction_mu, "");
  s.contact_friction_mu = number_or(root, "contact_friction_mu", s.contact_friction_mu, "");
  s.max_push_speed = number_or(root, "max_push_speed", s.max_push_speed, "");
  const json& table = require(root, "table_bounds", "");
  s.table_bounds = {as_vec2(require(table, "min", "table_bounds."), "table_bounds.min"),
                    as_vec2(require(table, "max", "table_bounds."), "table_bounds.max")};
  s.obstacle = parse_circle(require(root, "obstacle", ""), "obstacle");
  s.goal = parse_circle(require(root, "goal", ""), "goal");
  s.start_state = parse_state(require(root, "start_state", ""), "start_state");

  const json& phys = block(root, "physics");
  PhysicsParams& p = doc.physics;
  p.substep = number_or(phys, "substep", p.substep, "physics.");
  p.contact_stiffness = number_or(phys, "contact_stiffness", p.contact_stiffness, "physics.");
  p.contact_damping = number_or(phys, "contact_damping", p.contact_damping, "physics.");
  p.contact_friction_mu = optional_number(phys, "contact_friction_mu", "physics.");
  p.support_friction_mu = optional_number(phys, "support_friction_mu", "physics.");
  p.gravity = number_or(phys, "gravity", p.gravity, "physics.");
  p.vel_regularization = number_or(phys, "vel_regularization", p.vel_regularization, "physics.");
  p.support_torque_length = optional_number(phys, "support_torque_length", "physics.");

  doc.coarse.k_omega = number_or(block(root, "coarse"), "k_omega", doc.coarse.k_omega, "coarse.");

  const json& par = block(root, "parareal");
  doc.parareal.iterations = int_or(par, "iterations", doc.parareal.iterations, "parareal.");
  doc.parareal.workers = int_or(par, "workers", doc.parareal.workers, "parareal.");
  doc.parareal.project_iterates =
      bool_or(par, "project_iterates", doc.parareal.project_iterates, "parareal.");

  const json& cost = block(root, "cost");
  CostWeights& w = doc.cost;
  w.w_s = number_or(cost, "w_s", w.w_s, "cost.");
  w.w_p = number_or(cost, "w_p", w.w_p, "cost.");
  w.w_u = number_or(cost, "w_u", w.w_u, "cost.");
  w.W_E = number_or(cost, "W_E", w.W_E, "cost.");
  w.W_O = number_or(cost, "W_O", w.W_O, "cost.");
  w.w_c = number_or(cost, "w_c", w.w_c, "cost.");
  w.w = number_or(cost, "w", w.w, "cost.");

  const json& opt = block(root, "optimizer");
  OptimizerConfig& o = doc.optimizer;
  o.samples_per_iteration =
      int_or(opt, "samples_per_iteration", o.samples_per_iteration, "optimizer.");
  o.exploration_std = number_or(opt, "exploration_std", o.exploration_std, "optimizer.");
  o.opt_iterations = int_or(opt, "opt_iterations", o.opt_iterations, "optimizer.");
  o.temperature = number_or(opt, "temperature", o.temperature, "optimizer.");
  if (opt.contains("rng_seed")) {
    if (!opt.at("rng_seed").is_number_unsigned() && !opt.at("rng_seed").is_number_integer()) {
      field_error("optimizer.rng_seed", "expected a non-negative integer");
    }
    o.rng_seed = opt.at("rng_seed").get<std::uint64_t>();
  }
  o.parallel_samples = bool_or(opt, "parallel_samples", o.parallel_samples, "optimizer.");

  const json& mpc = block(root, "mpc");
  MPCConfig& m = doc.mpc;
  m.horizon = int_or(mpc, "horizon", m.horizon, "mpc.");
  m.control_duration = number_or(mpc, "control_duration", m.control_duration, "mpc.");
  m.max_actions = int_or(mpc, "max_actions", m.max_actions, "mpc.");
  m.world_noise_std = number_or(mpc, "world_noise_std", m.world_noise_std, "mpc.");
  m.initial_push_speed = number_or(mpc, "initial_push_speed", m.initial_push_speed, "mpc.");
  m.warm_start_duplicate_last =
      bool_or(mpc, "warm_start_duplicate_last", m.warm_start_duplicate_last, "mpc.");
  return doc;
}

SceneDocument load_scene_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    field_error("<document>", "cannot open scene file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scene_document(text.str());
}

std::string to_json(const SceneDocument& doc, int indent) {
  const SceneSpec& s = doc.scene;
  json root;
  root["slider_shape"] = shape_json(s.slider_shape);
  root["slider_mass"] = s.slider_mass;
  if (s.slider_inertia) {
    root["slider_inertia"] = *s.slider_inertia;
  }
  root["pusher_radius"] = s.pusher_radius;
  root["support_friction_mu"] = s.support_friction_mu;
  root["contact_friction_mu"] = s.contact_friction_mu;
  root["max_push_speed"] = s.max_push_speed;
  root["table_bounds"] = {{"min", vec2_json(s.table_bounds.min)},
                          {"max", vec2_json(s.table_bounds.max)}};
  root["obstacle"] = circle_json(s.obstacle);
  root["goal"] = circle_json(s.goal);
  root["start_state"] = state_json(s.start_state);

  const PhysicsParams& p = doc.physics;
  json phys = {{"substep", p.substep},
               {"contact_stiffness", p.contact_stiffness},
               {"contact_damping", p.contact_damping},
               {"gravity", p.gravity},
               {"vel_regularization", p.vel_regularization}};
  if (p.contact_friction_mu) phys["contact_friction_mu"] = *p.contact_friction_mu;
  if (p.support_friction_mu) phys["support_friction_mu"] = *p.support_friction_mu;
  if (p.support_torque_length) phys["support_torque_length"] = *p.support_torque_length;
  root["physics"] = phys;
  root["coarse"] = {{"k_omega", doc.coarse.k_omega}};
  root["parareal"] = {{"iterations", doc.parareal.iterations},
                      {"workers", doc.parareal.workers},
                      {"project_iterates", doc.parareal.project_iterates}};
  root["cost"] = {{"w_s", doc.cost.w_s}, {"w_p", doc.cost.w_p}, {"w_u", doc.cost.w_u},
                  {"W_E", doc.cost.W_E}, {"W_O", doc.cost.W_O}, {"w_c", doc.cost.w_c},
                  {"w", doc.cost.w}};
  root["optimizer"] = {{"samples_per_iteration", doc.optimizer.samples_per_iteration},
                       {"exploration_std", doc.optimizer.exploration_std},
                       {"opt_iterations", doc.optimizer.opt_iterations},
                       {"temperature", doc.optimizer.temperature},
                       {"rng_seed", doc.optimizer.rng_seed},
                       {"parallel_samples", doc.optimizer.parallel_samples}};
  root["mpc"] = {{"horizon", doc.mpc.horizon},
                 {"control_duration", doc.mpc.control_duration},
                 {"max_actions", doc.mpc.max_actions},
                 {"world_noise_std", doc.mpc.world_noise_std},
                 {"initial_push_speed", doc.mpc.initial_push_speed},
                 {"warm_start_duplicate_last", doc.mpc.warm_start_duplicate_last}};
  return root.dump(indent);
}

void save_scene_document(const SceneDocument& document, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  out << to_json(document) << '\n';
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    return "nan";
  }
  return std::string(buf, end);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryCsvHeader << '\n';
  double t = 0.0;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const State& s = traj.states[n];
    os << n << ',' << format_double(t) << ',' << format_double(s.pusher_pos.x) << ','
       << format_double(s.pusher_pos.y) << ',' << format_double(s.slider_pose.x) << ','
       << format_double(s.slider_pose.y) << ',' << format_double(s.slider_pose.theta) << ','
       << format_double(s.pusher_vel.x) << ',' << format_double(s.pusher_vel.y) << ','
       << format_double(s.slider_vel.vx) << ',' << format_double(s.slider_vel.vy) << ','
       << format_double(s.slider_vel.omega) << '\n';
    if (n < traj.controls.size()) {
      t += traj.controls[n].duration;
    }
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  write_trajectory_csv(out, trajectory);
}

std::vector<State> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read '" + path + "'");
  }
  std::string line;
  std::getline(in, line);
  if (line != kTrajectoryCsvHeader) {
    throw std::runtime_error("'" + path + "' is not a trajectory CSV");
  }
  std::vector<State> out;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> v;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      v.push_back(std::stod(cell));
    }
    if (v.size() != 12) {
      throw std::runtime_error("malformed trajectory row: " + line);
    }
    State s;
    s.pusher_pos = {v[2], v[3]};
    s.slider_pose = {v[4], v[5], v[6]};
    s.pusher_vel = {v[7], v[8]};
    s.slider_vel = {v[9], v[10], v[11]};
    out.push_back(s);
  }
  return out;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceEntry>& entries) {
  os << kConvergenceCsvHeader << '\n';
  for (const auto& e : entries) {
    os << e.iteration << ',' << format_double(e.error.trans_rms) << ','
       << format_double(e.error.rot_rms) << ',' << format_double(e.error.vel_rms) << ','
       << format_double(e.error.angvel_rms) << '\n';
  }
}

ControlSequence parse_controls(const std::string& text, double duration) {
  ControlSequence out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) {
      continue;
    }
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("control '" + item + "' must be 'vx,vy'");
    }
    try {
      out.push_back({{std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))},
                     duration});
    } catch (const std::logic_error&) {
      throw InvalidArgument("control '" + item + "' must be 'vx,vy'");
    }
  }
  if (out.empty()) {
    throw InvalidArgument("no controls given");
  }
  return out;
}

}  // namespace parapush
