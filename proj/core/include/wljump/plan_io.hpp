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

// Plan files, trajectory CSV and run reports.
//
// A plan file holds what a replay needs: robot parameters, phase times, the
// initial state, the target, the constraint settings and the sampled contact
// forces. The decision vector and the penalty report ride along for
// inspection; the replay never re-decodes them.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "wljump/jump_planner.hpp"
#include "wljump/scenario.hpp"
#include "wljump/verify.hpp"

namespace wljump {

inline constexpr int kPlanFormatVersion = 1;

struct PlanFile {
  std::string scenario_name;
  std::uint64_t seed = 0;
  RobotParams robot;
  TakeoffPlan plan;
  double replay_dt = 1e-4;
};

std::string plan_to_json(const PlanFile& file);

/// Overrides take dotted paths into the plan document plus the aliases mu,
/// tau_max, qd_max and dt. Throws ScenarioError on malformed input.
PlanFile parse_plan(std::string_view json_text, std::span<const Override> overrides = {});
PlanFile load_plan(const std::filesystem::path& path, std::span<const Override> overrides = {});

/// One row per recorded replay sample. Joint columns belong to the hind leg
/// and are zero while it is off the ground.
std::string trajectory_csv(const ReplayReport& report);

struct RunSummary {
  bool plan_feasible = false;
  bool audit_pass = false;
  std::optional<double> handoff_time;  // [s], when a roll-up preceded the jump
  std::optional<double> handoff_speed;  // [m/s]
};

std::string report_to_json(const PlanFile& file, const ReplayReport& replay, const RunSummary& summary);

/// Writes text atomically enough for our purposes (truncate + write).
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace wljump
