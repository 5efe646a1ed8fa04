// Copyright 2026 The wljump Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wljump/scenario.hpp"

#include <fstream>
#include <cmath>
#include <functional>
#include <sstream>

#include "json_reader.hpp"

namespace wljump {

using nlohmann::json;
using detail::JsonSection;

ScenarioError::ScenarioError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

namespace {

std::string resolve_alias(const std::string& key) {
  if (key == "mu") return "planner.mu";
  if (key == "tau_max") return "limits.tau_max_Nm";
  if (key == "qd_max") return "limits.qd_max_radps";
  if (key == "dt") return "replay.dt_s";
  if (key == "seed") return "seed";
  return key;
}

// Runs a validate() call and reports its message against the section path.
void checked(const std::string& section, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    std::string field = section;
    const auto colon = msg.find(':');
    if (colon != std::string::npos) {
      std::string name = msg.substr(0, colon);
      msg = msg.substr(colon + 1);
      if (!msg.empty() && msg.front() == ' ') msg.erase(0, 1);
      const auto dot = name.find('.');
      field = section + "." + (dot == std::string::npos ? name : name.substr(dot + 1));
    }
    throw ScenarioError(field, msg);
  }
}

KneeBranch parse_branch(const std::string& s, const std::string& path) {
  if (s == "backward") return KneeBranch::Backward;
  if (s == "forward") return KneeBranch::Forward;
  throw ScenarioError(path, "expected \"backward\" or \"forward\"");
}

PenaltyWeighting parse_weighting(const std::string& s, const std::string& path) {
  if (s == "indicator") return PenaltyWeighting::Indicator;
  if (s == "constant") return PenaltyWeighting::Constant;
  throw ScenarioError(path, "expected \"indicator\" or \"constant\"");
}

void read_de(JsonSection& sec, de::DEConfig& cfg) {
  cfg.population_size = sec.integer("population_size", cfg.population_size);
  cfg.differential_weight = sec.number("differential_weight", cfg.differential_weight);
  cfg.crossover_rate = sec.number("crossover_rate", cfg.crossover_rate);
  cfg.max_generations = sec.integer("max_generations", cfg.max_generations);
  cfg.target_cost = sec.number("target_cost", cfg.target_cost);
  cfg.threads = sec.integer("threads", cfg.threads);
  sec.finish();
}

json de_json(const de::DEConfig& cfg) {
  return {{"population_size", cfg.population_size},   {"differential_weight", cfg.differential_weight},
          {"crossover_rate", cfg.crossover_rate},     {"max_generations", cfg.max_generations},
          {"target_cost", cfg.target_cost},           {"threads", cfg.threads}};
}

Vec3 read_vec3(JsonSection& sec, const std::string& key) {
  const json& v = sec.raw(key);
  const std::string path = sec.path_of(key);
  if (!v.is_array() || v.size() != 3) throw ScenarioError(path, "expected an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ScenarioError(path, "expected an array of 3 numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

json parse_value(const std::string& text) {
  try {
    json v = json::parse(text);
    if (v.is_primitive()) return v;
  } catch (const json::parse_error&) {
  }
  return json(text);
}

void apply_one(json& doc, const std::string& dotted, const std::string& value) {
  if (dotted.empty()) throw ScenarioError("", "override key must not be empty");
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ScenarioError(dotted, "malformed override key");
    path += (path.empty() ? "" : ".") + part;
    const bool last = dot == std::string::npos;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (const std::exception&) {
        throw ScenarioError(path, "expected an array index");
      }
      if (idx >= node->size()) throw ScenarioError(path, "array index out of range");
      node = &(*node)[idx];
    } else {
      if (!node->is_object() && !node->is_null()) throw ScenarioError(path, "cannot descend into a scalar");
      node = &(*node)[part];
    }
    if (last) break;
    start = dot + 1;
  }
  *node = parse_value(value);
}

}  // namespace

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ScenarioError(std::string(text), "override must have the form key=value");
  }
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

std::string apply_overrides(std::string_view json_text, std::span<const Override> overrides) {
  json doc = detail::parse_document(json_text);
  for (const Override& o : overrides) apply_one(doc, o.key, o.value);
  return doc.dump(2);
}

Scenario parse_scenario(std::string_view json_text, std::span<const Override> overrides) {
  json doc = detail::parse_document(json_text);
  for (const Override& o : overrides) apply_one(doc, resolve_alias(o.key), o.value);
  if (!doc.is_object()) throw ScenarioError("", "scenario must be a JSON object");

  JsonSection root(doc, "");
  Scenario sc;
  const int version = root.required_integer("format_version");
  if (version != kScenarioFormatVersion) {
    throw ScenarioError("format_version", "unsupported version " + std::to_string(version) + " (expected " +
                                              std::to_string(kScenarioFormatVersion) + ")");
  }
  sc.name = root.string("name", "scenario");
  {
    const json& seed = root.raw("seed");
    if (seed.is_null()) throw ScenarioError("seed", "required field is missing");
    if (!seed.is_number_unsigned()) throw ScenarioError("seed", "expected a non-negative integer");
    sc.seed = seed.get<std::uint64_t>();
  }

  if (root.has("robot")) {
    JsonSection s = root.child("robot");
    RobotParams& r = sc.robot;
    r.mass = s.number("mass_kg", r.mass);
    r.pitch_inertia = s.number("pitch_inertia_kgm2", r.pitch_inertia);
    r.body_half_length = s.number("body_half_length_m", r.body_half_length);
    r.hip_height_nominal = s.number("hip_height_nominal_m", r.hip_height_nominal);
    r.wheel_radius = s.number("wheel_radius_m", r.wheel_radius);
    r.link_length_upper = s.number("link_length_upper_m", r.link_length_upper);
    r.link_length_lower = s.number("link_length_lower_m", r.link_length_lower);
    r.gravity = s.number("gravity_mps2", r.gravity);
    s.finish();
  }
  checked("robot", [&] { sc.robot.validate(); });

  if (root.has("limits")) {
    JsonSection s = root.child("limits");
    JointLimits& l = sc.planner.limits;
    l.q_min = s.number("q_min_rad", l.q_min);
    l.q_max = s.number("q_max_rad", l.q_max);
    l.qd_max = s.number("qd_max_radps", l.qd_max);
    l.tau_max = s.number("tau_max_Nm", l.tau_max);
    s.finish();
  }
  checked("limits", [&] { sc.planner.limits.validate(); });

  sc.initial = {0.0, sc.robot.hip_height_nominal, 0.0, 0.0, 0.0, 0.0};
  if (root.has("initial")) {
    JsonSection s = root.child("initial");
    PlanarState& st = sc.initial;
    st.x = s.number("x_m", st.x);
    st.z = s.number("z_m", st.z);
    st.theta = s.number("theta_rad", st.theta);
    st.vx = s.number("vx_mps", st.vx);
    st.vz = s.number("vz_mps", st.vz);
    st.omega = s.number("omega_radps", st.omega);
    s.finish();
    if (!st.finite()) throw ScenarioError("initial", "all entries must be finite");
  }
  if (root.has("prejump_velocity_mps")) {
    sc.prejump_velocity = root.number("prejump_velocity_mps", 0.0);
    if (!std::isfinite(*sc.prejump_velocity)) throw ScenarioError("prejump_velocity_mps", "must be finite");
  }

  {
    JsonSection s = root.child("target");
    sc.target.x = s.required_number("x_m");
    sc.target.z = s.required_number("z_m");
    sc.target.theta = s.required_number("theta_rad");
    s.finish();
    checked("target", [&] { sc.target.validate(); });
  }

  if (root.has("planner")) {
    JsonSection s = root.child("planner");
    PlannerConfig& p = sc.planner;
    p.gamma = s.boolean("gamma", p.gamma);
    p.mu = s.number("mu", p.mu);
    p.f_z_min = s.number("f_z_min_N", p.f_z_min);
    if (s.has("z_min_m")) p.z_min = s.number("z_min_m", 0.0);
    p.sample_count = s.integer("sample_count", p.sample_count);
    p.transcription_substeps = s.integer("transcription_substeps", p.transcription_substeps);
    p.restarts = s.integer("restarts", p.restarts);
    p.violation_tolerance = s.number("violation_tolerance", p.violation_tolerance);
    p.limit_margin = s.number("limit_margin", p.limit_margin);
    if (s.has("weighting")) p.weighting = parse_weighting(s.string("weighting", ""), s.path_of("weighting"));
    if (s.has("knee_branch")) p.knee_branch = parse_branch(s.string("knee_branch", ""), s.path_of("knee_branch"));
    if (s.has("de")) {
      JsonSection d = s.child("de");
      read_de(d, p.de);
    }
    if (s.has("bounds")) {
      JsonSection b = s.child("bounds");
      JumpSearchBounds& bb = p.bounds;
      bb.keyframe_dx = b.number("keyframe_dx_m", bb.keyframe_dx);
      bb.z_lo = b.number("z_lo_m", bb.z_lo);
      bb.z_hi = b.number("z_hi_m", bb.z_hi);
      bb.theta_lo = b.number("theta_lo_rad", bb.theta_lo);
      bb.theta_hi = b.number("theta_hi_rad", bb.theta_hi);
      bb.t1_lo = b.number("t1_lo_s", bb.t1_lo);
      bb.t1_hi = b.number("t1_hi_s", bb.t1_hi);
      bb.step2_lo = b.number("step2_lo_s", bb.step2_lo);
      bb.step2_hi = b.number("step2_hi_s", bb.step2_hi);
      bb.flight_lo = b.number("flight_lo_s", bb.flight_lo);
      bb.flight_hi = b.number("flight_hi_s", bb.flight_hi);
      b.finish();
    }
    if (s.has("initial_guess")) {
      JsonSection g = s.child("initial_guess");
      DecisionVector d;
      d.s_half_t1 = read_vec3(g, "s_half_t1");
      d.s_t2 = read_vec3(g, "s_t2");
      d.s_t3 = sc.target.pose();
      d.t1 = g.required_number("t1_s");
      d.t2 = g.required_number("t2_s");
      d.t3 = g.required_number("t3_s");
      g.finish();
      checked("planner.initial_guess", [&] { d.validate(); });
      p.initial_guess = d;
    }
    s.finish();
  }
  sc.planner.de.seed = sc.seed;
  checked("planner.de", [&] { sc.planner.de.validate(); });
  checked("planner", [&] { sc.planner.validate(); });

  if (root.has("locomotion")) {
    JsonSection s = root.child("locomotion");
    MPCConfig& m = sc.locomotion;
    m.horizon = s.number("horizon_s", m.horizon);
    m.dt = s.number("dt_s", m.dt);
    m.control_rate = s.number("control_rate_hz", m.control_rate);
    m.velocity_weight = s.number("velocity_weight", m.velocity_weight);
    m.force_weight = s.number("force_weight", m.force_weight);
    m.wheel_gain = s.number("wheel_gain_Nspm", m.wheel_gain);
    m.mu = s.number("mu", m.mu);
    m.blocks = s.integer("blocks", m.blocks);
    m.sim_dt = s.number("sim_dt_s", m.sim_dt);
    sc.locomotion_max_time = s.number("max_time_s", sc.locomotion_max_time);
    if (s.has("solver")) {
      JsonSection d = s.child("solver");
      read_de(d, m.solver);
    }
    s.finish();
    if (!(sc.locomotion_max_time > 0.0)) throw ScenarioError("locomotion.max_time_s", "must be > 0");
  }
  sc.locomotion.solver.seed = sc.seed;
  checked("locomotion", [&] { sc.locomotion.validate(); });

  if (root.has("replay")) {
    JsonSection s = root.child("replay");
    sc.replay_dt = s.number("dt_s", sc.replay_dt);
    s.finish();
    if (!(sc.replay_dt > 0.0)) throw ScenarioError("replay.dt_s", "must be > 0");
  }

  if (root.has("output")) {
    JsonSection s = root.child("output");
    OutputSpec& o = sc.output;
    o.directory = s.string("directory", o.directory);
    o.plan_file = s.string("plan_file", o.plan_file);
    o.trajectory_file = s.string("trajectory_file", o.trajectory_file);
    o.report_file = s.string("report_file", o.report_file);
    s.finish();
  }
  root.finish();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path, std::span<const Override> overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), overrides);
}

std::string scenario_to_json(const Scenario& sc) {
  const RobotParams& r = sc.robot;
  const PlannerConfig& p = sc.planner;
  const JumpSearchBounds& b = p.bounds;
  const MPCConfig& m = sc.locomotion;
  json doc;
  doc["format_version"] = kScenarioFormatVersion;
  doc["name"] = sc.name;
  doc["seed"] = sc.seed;
  doc["robot"] = {{"mass_kg", r.mass},
                  {"pitch_inertia_kgm2", r.pitch_inertia},
                  {"body_half_length_m", r.body_half_length},
                  {"hip_height_nominal_m", r.hip_height_nominal},
                  {"wheel_radius_m", r.wheel_radius},
                  {"link_length_upper_m", r.link_length_upper},
                  {"link_length_lower_m", r.link_length_lower},
                  {"gravity_mps2", r.gravity}};
  doc["limits"] = {{"q_min_rad", p.limits.q_min},
                   {"q_max_rad", p.limits.q_max},
                   {"qd_max_radps", p.limits.qd_max},
                   {"tau_max_Nm", p.limits.tau_max}};
  doc["initial"] = {{"x_m", sc.initial.x},         {"z_m", sc.initial.z},   {"theta_rad", sc.initial.theta},
                    {"vx_mps", sc.initial.vx},     {"vz_mps", sc.initial.vz}, {"omega_radps", sc.initial.omega}};
  if (sc.prejump_velocity) doc["prejump_velocity_mps"] = *sc.prejump_velocity;
  doc["target"] = {{"x_m", sc.target.x}, {"z_m", sc.target.z}, {"theta_rad", sc.target.theta}};
  json planner = {{"gamma", p.gamma},
                  {"mu", p.mu},
                  {"f_z_min_N", p.f_z_min},
                  {"sample_count", p.sample_count},
                  {"transcription_substeps", p.transcription_substeps},
                  {"restarts", p.restarts},
                  {"violation_tolerance", p.violation_tolerance},
                  {"limit_margin", p.limit_margin},
                  {"weighting", p.weighting == PenaltyWeighting::Indicator ? "indicator" : "constant"},
                  {"knee_branch", p.knee_branch == KneeBranch::Backward ? "backward" : "forward"},
                  {"de", de_json(p.de)},
                  {"bounds",
                   {{"keyframe_dx_m", b.keyframe_dx},
                    {"z_lo_m", b.z_lo},
                    {"z_hi_m", b.z_hi},
                    {"theta_lo_rad", b.theta_lo},
                    {"theta_hi_rad", b.theta_hi},
                    {"t1_lo_s", b.t1_lo},
                    {"t1_hi_s", b.t1_hi},
                    {"step2_lo_s", b.step2_lo},
                    {"step2_hi_s", b.step2_hi},
                    {"flight_lo_s", b.flight_lo},
                    {"flight_hi_s", b.flight_hi}}}};
  if (p.z_min) planner["z_min_m"] = *p.z_min;
  if (p.initial_guess) {
    const DecisionVector& d = *p.initial_guess;
    planner["initial_guess"] = {{"s_half_t1", {d.s_half_t1.x(), d.s_half_t1.y(), d.s_half_t1.z()}},
                                {"s_t2", {d.s_t2.x(), d.s_t2.y(), d.s_t2.z()}},
                                {"t1_s", d.t1},
                                {"t2_s", d.t2},
                                {"t3_s", d.t3}};
  }
  doc["planner"] = planner;
  doc["locomotion"] = {{"horizon_s", m.horizon},
                       {"dt_s", m.dt},
                       {"control_rate_hz", m.control_rate},
                       {"velocity_weight", m.velocity_weight},
                       {"force_weight", m.force_weight},
                       {"wheel_gain_Nspm", m.wheel_gain},
                       {"mu", m.mu},
                       {"blocks", m.blocks},
                       {"sim_dt_s", m.sim_dt},
                       {"max_time_s", sc.locomotion_max_time},
                       {"solver", de_json(m.solver)}};
  doc["replay"] = {{"dt_s", sc.replay_dt}};
  doc["output"] = {{"directory", sc.output.directory},
                   {"plan_file", sc.output.plan_file},
                   {"trajectory_file", sc.output.trajectory_file},
                   {"report_file", sc.output.report_file}};
  return doc.dump(2) + "\n";
}

}  // namespace wljump
