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

#include "wljump/plan_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json_reader.hpp"

namespace wljump {

using nlohmann::json;
using detail::JsonSection;

namespace {

std::string resolve_alias(const std::string& key) {
  if (key == "mu") return "constraints.mu";
  if (key == "tau_max") return "constraints.limits.tau_max_Nm";
  if (key == "qd_max") return "constraints.limits.qd_max_radps";
  if (key == "dt") return "replay.dt_s";
  return key;
}

json state_json(const PlanarState& s) {
  return {{"x_m", s.x},       {"z_m", s.z},       {"theta_rad", s.theta},
          {"vx_mps", s.vx},   {"vz_mps", s.vz},   {"omega_radps", s.omega}};
}

PlanarState read_state(JsonSection sec) {
  PlanarState s;
  s.x = sec.required_number("x_m");
  s.z = sec.required_number("z_m");
  s.theta = sec.required_number("theta_rad");
  s.vx = sec.required_number("vx_mps");
  s.vz = sec.required_number("vz_mps");
  s.omega = sec.required_number("omega_radps");
  sec.finish();
  return s;
}

json vec_json(const Vec2& v) { return {v.x(), v.y()}; }
json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

template <int N>
Eigen::Matrix<double, N, 1> read_vec(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != N) {
    throw ScenarioError(path, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    if (!v[i].is_number()) throw ScenarioError(path, "expected numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

json samples_json(const std::vector<TakeoffSample>& samples) {
  json arr = json::array();
  for (const TakeoffSample& s : samples) {
    arr.push_back({{"t_s", s.t},
                   {"state", state_json(s.state)},
                   {"f_hind_N", vec_json(s.f_hind)},
                   {"f_front_N", vec_json(s.f_front)}});
  }
  return arr;
}

std::vector<TakeoffSample> read_samples(const json& arr, const std::string& path, int phase) {
  if (!arr.is_array()) throw ScenarioError(path, "expected an array");
  std::vector<TakeoffSample> out;
  out.reserve(arr.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "." + std::to_string(i);
    JsonSection sec(arr[i], p);
    TakeoffSample s;
    s.phase = phase;
    s.t = sec.required_number("t_s");
    if (!(s.t >= prev)) throw ScenarioError(p + ".t_s", "sample times must be non-decreasing");
    prev = s.t;
    s.state = read_state(sec.child("state"));
    s.f_hind = read_vec<2>(sec.raw("f_hind_N"), p + ".f_hind_N");
    s.f_front = read_vec<2>(sec.raw("f_front_N"), p + ".f_front_N");
    s.in_contact = {true, phase == 1};
    sec.finish();
    out.push_back(s);
  }
  return out;
}

const char* branch_name(KneeBranch b) { return b == KneeBranch::Backward ? "backward" : "forward"; }

json penalties_json(const PenaltyReport& r) {
  json classes = json::array();
  for (int i = 0; i < kPenaltyClassCount; ++i) {
    classes.push_back({{"name", std::string(to_string(static_cast<PenaltyClass>(i)))},
                       {"sigma", r.sigma[i]},
                       {"weight", r.weight[i]}});
  }
  return {{"total_cost", r.total_cost}, {"zeta_J", r.zeta}, {"feasible", r.feasible()}, {"classes", classes}};
}

PenaltyReport read_penalties(JsonSection sec, double tolerance) {
  PenaltyReport r;
  r.total_cost = sec.required_number("total_cost");
  r.zeta = sec.required_number("zeta_J");
  sec.boolean("feasible", false);
  const json& classes = sec.raw("classes");
  const std::string path = sec.path_of("classes");
  if (!classes.is_array() || classes.size() != kPenaltyClassCount) {
    throw ScenarioError(path, "expected " + std::to_string(kPenaltyClassCount) + " entries");
  }
  for (int i = 0; i < kPenaltyClassCount; ++i) {
    JsonSection c(classes[i], path + "." + std::to_string(i));
    const std::string name = c.string("name", "");
    if (name != to_string(static_cast<PenaltyClass>(i))) {
      throw ScenarioError(c.path_of("name"), "expected \"" + std::string(to_string(static_cast<PenaltyClass>(i))) + "\"");
    }
    r.sigma[i] = c.required_number("sigma");
    r.weight[i] = c.required_integer("weight");
    c.finish();
    if (!(r.sigma[i] <= tolerance)) r.violated_mask |= 1u << i;
  }
  sec.finish();
  return r;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string plan_to_json(const PlanFile& file) {
  const TakeoffPlan& p = file.plan;
  const RobotParams& r = file.robot;
  const PlanConstraints& c = p.constraints;
  json doc;
  doc["format_version"] = kPlanFormatVersion;
  doc["kind"] = "wljump.plan";
  doc["scenario"] = file.scenario_name;
  doc["seed"] = file.seed;
  doc["robot"] = {{"mass_kg", r.mass},
                  {"pitch_inertia_kgm2", r.pitch_inertia},
                  {"body_half_length_m", r.body_half_length},
                  {"hip_height_nominal_m", r.hip_height_nominal},
                  {"wheel_radius_m", r.wheel_radius},
                  {"link_length_upper_m", r.link_length_upper},
                  {"link_length_lower_m", r.link_length_lower},
                  {"gravity_mps2", r.gravity}};
  doc["phase"] = {{"t1_s", p.phase.t1}, {"t2_s", p.phase.t2}, {"t3_s", p.phase.t3}, {"gamma", p.phase.gamma}};
  doc["decision"] = {{"s_half_t1", vec_json(p.decision.s_half_t1)},
                     {"s_t2", vec_json(p.decision.s_t2)},
                     {"s_t3", vec_json(p.decision.s_t3)},
                     {"t1_s", p.decision.t1},
                     {"t2_s", p.decision.t2},
                     {"t3_s", p.decision.t3}};
  doc["initial"] = state_json(p.initial);
  doc["target"] = {{"x_m", p.target.x}, {"z_m", p.target.z}, {"theta_rad", p.target.theta}};
  doc["constraints"] = {{"mu", c.mu},
                        {"f_z_min_N", c.f_z_min},
                        {"z_min_m", c.z_min},
                        {"tolerance", c.tolerance},
                        {"knee_branch", branch_name(c.knee_branch)},
                        {"limits",
                         {{"q_min_rad", c.limits.q_min},
                          {"q_max_rad", c.limits.q_max},
                          {"qd_max_radps", c.limits.qd_max},
                          {"tau_max_Nm", c.limits.tau_max}}}};
  doc["split"] = {{"offset_N", p.split_offset}, {"rate_Nps", p.split_rate}, {"pitch_residual", p.pitch_residual}};
  doc["penalties"] = penalties_json(p.penalties);
  doc["energy_J"] = p.energy_zeta;
  doc["x_roll_m"] = p.x_roll;
  doc["takeoff_state"] = state_json(p.takeoff_state);
  doc["terminal_state"] = state_json(p.terminal_state);
  doc["step1"] = samples_json(p.step1_samples);
  doc["step2"] = samples_json(p.step2_samples);
  doc["replay"] = {{"dt_s", file.replay_dt}};
  return doc.dump(2) + "\n";
}

PlanFile parse_plan(std::string_view json_text, std::span<const Override> overrides) {
  json doc = detail::parse_document(json_text);
  if (!doc.is_object()) throw ScenarioError("", "plan file must be a JSON object");
  std::vector<Override> resolved;
  for (const Override& o : overrides) resolved.push_back({resolve_alias(o.key), o.value});
  if (!resolved.empty()) doc = json::parse(apply_overrides(doc.dump(), resolved));

  JsonSection root(doc, "");
  const int version = root.required_integer("format_version");
  if (version != kPlanFormatVersion) {
    throw ScenarioError("format_version", "unsupported version " + std::to_string(version));
  }
  if (root.string("kind", "") != "wljump.plan") throw ScenarioError("kind", "expected \"wljump.plan\"");

  PlanFile file;
  file.scenario_name = root.string("scenario", "");
  {
    const json& seed = root.raw("seed");
    if (!seed.is_number_unsigned()) throw ScenarioError("seed", "expected a non-negative integer");
    file.seed = seed.get<std::uint64_t>();
  }
  {
    JsonSection s = root.child("robot");
    RobotParams& r = file.robot;
    r.mass = s.required_number("mass_kg");
    r.pitch_inertia = s.required_number("pitch_inertia_kgm2");
    r.body_half_length = s.required_number("body_half_length_m");
    r.hip_height_nominal = s.required_number("hip_height_nominal_m");
    r.wheel_radius = s.required_number("wheel_radius_m");
    r.link_length_upper = s.required_number("link_length_upper_m");
    r.link_length_lower = s.required_number("link_length_lower_m");
    r.gravity = s.required_number("gravity_mps2");
    s.finish();
    try {
      r.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("robot", e.what());
    }
  }

  TakeoffPlan& p = file.plan;
  {
    JsonSection s = root.child("phase");
    p.phase.t1 = s.required_number("t1_s");
    p.phase.t2 = s.required_number("t2_s");
    p.phase.t3 = s.required_number("t3_s");
    p.phase.gamma = s.boolean("gamma", false);
    s.finish();
    try {
      p.phase.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("phase", e.what());
    }
  }
  {
    JsonSection s = root.child("decision");
    p.decision.s_half_t1 = read_vec<3>(s.raw("s_half_t1"), "decision.s_half_t1");
    p.decision.s_t2 = read_vec<3>(s.raw("s_t2"), "decision.s_t2");
    p.decision.s_t3 = read_vec<3>(s.raw("s_t3"), "decision.s_t3");
    p.decision.t1 = s.required_number("t1_s");
    p.decision.t2 = s.required_number("t2_s");
    p.decision.t3 = s.required_number("t3_s");
    s.finish();
  }
  p.initial = read_state(root.child("initial"));
  {
    JsonSection s = root.child("target");
    p.target.x = s.required_number("x_m");
    p.target.z = s.required_number("z_m");
    p.target.theta = s.required_number("theta_rad");
    s.finish();
  }
  {
    JsonSection s = root.child("constraints");
    PlanConstraints& c = p.constraints;
    c.mu = s.required_number("mu");
    c.f_z_min = s.required_number("f_z_min_N");
    c.z_min = s.required_number("z_min_m");
    c.tolerance = s.required_number("tolerance");
    const std::string branch = s.string("knee_branch", "backward");
    if (branch == "backward") {
      c.knee_branch = KneeBranch::Backward;
    } else if (branch == "forward") {
      c.knee_branch = KneeBranch::Forward;
    } else {
      throw ScenarioError("constraints.knee_branch", "expected \"backward\" or \"forward\"");
    }
    JsonSection l = s.child("limits");
    c.limits.q_min = l.required_number("q_min_rad");
    c.limits.q_max = l.required_number("q_max_rad");
    c.limits.qd_max = l.required_number("qd_max_radps");
    c.limits.tau_max = l.required_number("tau_max_Nm");
    l.finish();
    s.finish();
    if (!(c.mu > 0.0)) throw ScenarioError("constraints.mu", "must be > 0");
    if (!(c.tolerance >= 0.0)) throw ScenarioError("constraints.tolerance", "must be >= 0");
    try {
      c.limits.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("constraints.limits", e.what());
    }
  }
  {
    JsonSection s = root.child("split");
    p.split_offset = s.required_number("offset_N");
    p.split_rate = s.required_number("rate_Nps");
    p.pitch_residual = s.required_number("pitch_residual");
    s.finish();
  }
  p.penalties = read_penalties(root.child("penalties"), p.constraints.tolerance);
  p.energy_zeta = root.required_number("energy_J");
  p.x_roll = root.required_number("x_roll_m");
  p.takeoff_state = read_state(root.child("takeoff_state"));
  p.terminal_state = read_state(root.child("terminal_state"));
  p.step1_samples = read_samples(root.raw("step1"), "step1", 1);
  p.step2_samples = read_samples(root.raw("step2"), "step2", 2);
  if (p.step1_samples.size() < 2) throw ScenarioError("step1", "expected at least 2 samples");
  if (p.phase.has_step2() && p.step2_samples.size() < 2) {
    throw ScenarioError("step2", "expected at least 2 samples for a two-step take-off");
  }
  {
    JsonSection s = root.child("replay");
    file.replay_dt = s.required_number("dt_s");
    s.finish();
    if (!(file.replay_dt > 0.0)) throw ScenarioError("replay.dt_s", "must be > 0");
  }
  root.finish();
  return file;
}

PlanFile load_plan(const std::filesystem::path& path, std::span<const Override> overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open plan file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str(), overrides);
}

std::string trajectory_csv(const ReplayReport& report) {
  std::string out =
      "time_s,x_m,z_m,theta_rad,vx_mps,vz_mps,omega_radps,fH_x_N,fH_z_N,fF_x_N,fF_z_N,"
      "tau_hip_Nm,tau_knee_Nm,qd_hip_radps,qd_knee_radps,phase_id\n";
  for (const ReplaySample& s : report.samples) {
    const LegSample& hind = s.legs[0];
    const bool joints = s.in_contact[0] && hind.reachable;
    const double values[] = {s.t,          s.state.x,    s.state.z,     s.state.theta, s.state.vx,
                             s.state.vz,   s.state.omega, s.f_hind.x(),  s.f_hind.y(),  s.f_front.x(),
                             s.f_front.y(), joints ? hind.torque.x() : 0.0, joints ? hind.torque.y() : 0.0,
                             joints ? hind.joints.qd_hip : 0.0, joints ? hind.joints.qd_knee : 0.0};
    for (double v : values) {
      out += fmt(v);
      out += ',';
    }
    out += std::to_string(s.phase_id);
    out += '\n';
  }
  return out;
}

std::string report_to_json(const PlanFile& file, const ReplayReport& replay, const RunSummary& summary) {
  const TakeoffPlan& p = file.plan;
  json violated = json::array();
  for (int i = 0; i < kPenaltyClassCount; ++i) {
    if (p.penalties.violated_mask & (1u << i)) violated.push_back(std::string(to_string(static_cast<PenaltyClass>(i))));
  }
  json audit = json::object();
  json flagged = json::array();
  for (int i = 1; i < kPenaltyClassCount; ++i) {
    const auto k = static_cast<PenaltyClass>(i);
    const std::string name(to_string(k));
    audit[name] = {{"max_violation", replay.audit.max_violation[i]},
                   {"time_s", replay.audit.worst_time[i]},
                   {"flagged", replay.audit.flagged(k)}};
    if (replay.audit.flagged(k)) flagged.push_back(name);
  }
  json doc;
  doc["format_version"] = kPlanFormatVersion;
  doc["scenario"] = file.scenario_name;
  doc["seed"] = file.seed;
  doc["plan_feasible"] = summary.plan_feasible;
  doc["audit_pass"] = summary.audit_pass;
  doc["violated_classes"] = violated;
  doc["penalties"] = penalties_json(p.penalties);
  doc["phase"] = {{"t1_s", p.phase.t1}, {"t2_s", p.phase.t2}, {"t3_s", p.phase.t3}};
  doc["x_roll_m"] = p.x_roll;
  if (summary.handoff_time) doc["handoff"] = {{"time_s", *summary.handoff_time}, {"speed_mps", *summary.handoff_speed}};
  doc["replay"] = {{"dt_used_s", replay.dt_used},
                   {"terminal_state", state_json(replay.terminal_state)},
                   {"terminal_error", {{"x_m", replay.terminal_error.x()},
                                       {"z_m", replay.terminal_error.y()},
                                       {"theta_rad", replay.terminal_error.z()}}},
                   {"apex_height_m", replay.apex_height},
                   {"apex_time_s", replay.apex_time},
                   {"peak_torque_Nm", {{"hip", replay.peak_torque.x()}, {"knee", replay.peak_torque.y()}}},
                   {"peak_velocity_radps", {{"hip", replay.peak_velocity.x()}, {"knee", replay.peak_velocity.y()}}},
                   {"flight_invariant_drift", replay.flight_invariant_drift},
                   {"audit", audit},
                   {"flagged_classes", flagged}};
  return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wljump
