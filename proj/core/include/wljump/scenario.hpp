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

// Scenario files: JSON documents describing one experiment (robot, limits,
// planner and locomotion settings, target, start condition, seed, outputs).
//
// Field names carry their units (tau_max_Nm, horizon_s, ...). Unknown keys
// are rejected so that typos surface as errors rather than silent defaults.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wljump/jump_planner.hpp"
#include "wljump/locomotion.hpp"
#include "wljump/types.hpp"

namespace wljump {

inline constexpr int kScenarioFormatVersion = 1;

/// Input error with the offending field path (e.g. "planner.de.crossover_rate").
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message);
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct OutputSpec {
  std::string directory = "out";
  std::string plan_file = "plan.json";
  std::string trajectory_file = "trajectory.csv";
  std::string report_file = "report.json";
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  RobotParams robot;
  PlannerConfig planner;
  MPCConfig locomotion;
  double locomotion_max_time = 10.0;  // [s]
  JumpTarget target;
  PlanarState initial;
  std::optional<double> prejump_velocity;  // roll up to this speed before the jump [m/s]
  double replay_dt = 1e-4;
  OutputSpec output;

  [[nodiscard]] WheelLimits wheel_limits() const { return {planner.limits.tau_max, planner.limits.qd_max}; }
};

/// key=value pair applied to the document before it is validated. The key is
/// a dotted path ("limits.tau_max_Nm"); the value is parsed as JSON
/// when possible and taken as a string otherwise.
struct Override {
  std::string key;
  std::string value;
};

/// Splits "key=value". Throws ScenarioError when there is no '='.
Override parse_override(std::string_view text);

Scenario parse_scenario(std::string_view json_text, std::span<const Override> overrides = {});
Scenario load_scenario(const std::filesystem::path& path, std::span<const Override> overrides = {});

/// Canonical JSON rendering (every field written). parse_scenario of the
/// result reproduces the scenario.
std::string scenario_to_json(const Scenario& scenario);

/// Applies overrides to an arbitrary JSON document and returns the new text.
std::string apply_overrides(std::string_view json_text, std::span<const Override> overrides);

}  // namespace wljump
