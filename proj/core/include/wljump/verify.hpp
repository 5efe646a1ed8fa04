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

// Fine-step replay of a take-off plan. The replay only consumes the plan's
// initial state and its sampled contact forces; the state is re-integrated
// with RK4 and every constraint is re-checked at each step.
#pragma once

#include <array>
#include <vector>

#include "wljump/jump_planner.hpp"

namespace wljump {

struct ReplayOptions {
  double dt = 1e-4;       // requested step [s]; capped at t1 / 50
  int record_every = 10;  // keep every n-th step in ReplayReport::samples
};

struct ReplaySample {
  double t = 0.0;
  int phase_id = 1;  // 1 step 1, 2 step 2, 3 flight
  PlanarState state;
  Vec2 f_hind = Vec2::Zero();
  Vec2 f_front = Vec2::Zero();
  std::array<bool, 2> in_contact{};
  std::array<LegSample, 2> legs{};
};

/// Maximum violation per penalty class over the dense grid. The terminal
/// class is not audited here (see ReplayReport::terminal_error).
struct ConstraintAudit {
  std::array<double, kPenaltyClassCount> max_violation{};
  std::array<double, kPenaltyClassCount> worst_time{};
  double tolerance = 1e-6;

  [[nodiscard]] bool flagged(PenaltyClass c) const {
    return !(max_violation[static_cast<int>(c)] <= tolerance);
  }
  [[nodiscard]] bool pass() const;
};

struct ReplayReport {
  PlanarState terminal_state;
  Vec3 terminal_error = Vec3::Zero();  // |replayed - target| per (x, z, theta)
  double apex_height = 0.0;
  double apex_time = 0.0;
  Vec2 peak_torque = Vec2::Zero();    // (hip, knee) over all stance legs [Nm]
  Vec2 peak_velocity = Vec2::Zero();  // (hip, knee) [rad/s]
  double flight_invariant_drift = 0.0;  // max |(vz^2 + 2 g z) - initial| in flight
  ConstraintAudit audit;
  double dt_used = 0.0;
  std::vector<ReplaySample> samples;
};

/// Replays against the constraint settings stored in the plan.
ReplayReport replay(const TakeoffPlan& plan, const RobotParams& params, const ReplayOptions& options = {});

/// Replays against explicitly supplied constraint settings.
ReplayReport replay(const TakeoffPlan& plan, const RobotParams& params, const PlanConstraints& constraints,
                    const ReplayOptions& options = {});

/// Dense re-check of the stance, joint and clearance constraints.
ConstraintAudit constraint_audit(const TakeoffPlan& plan, const RobotParams& params,
                                 const PlanConstraints& constraints, double dt = 1e-4);

}  // namespace wljump
