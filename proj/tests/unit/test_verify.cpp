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

#include <cmath>

#include <gtest/gtest.h>

#include "wljump/planar_dynamics.hpp"
#include "wljump/verify.hpp"

namespace wljump {
namespace {

PlanarState rest(const RobotParams& p) { return {0.0, p.hip_height_nominal, 0.0, 0.0, 0.0, 0.0}; }

DecisionVector hover_decision(const PlanarState& s0, double t1, double flight, double g) {
  DecisionVector d;
  d.s_half_t1 = s0.pose();
  d.s_t2 = s0.pose();
  d.s_t3 = {s0.x, s0.z - 0.5 * g * flight * flight, s0.theta};
  d.t1 = t1;
  d.t2 = t1;
  d.t3 = t1 + flight;
  return d;
}

// A mild forward hop: the legs stay inside their workspace and the body
// carries horizontal force, which the low-friction audit needs.
DecisionVector forward_hop() {
  DecisionVector d;
  d.s_half_t1 = {0.005, 0.295, 0.0};
  d.s_t2 = {0.04, 0.36, 0.0};
  d.s_t3 = {0.20, 0.45, 0.0};
  d.t1 = 0.25;
  d.t2 = 0.25;
  d.t3 = 0.55;
  return d;
}

TakeoffPlan decoded(const DecisionVector& d, bool gamma, int sample_count = 41, int substeps = 16) {
  DecodeOptions o;
  o.sample_count = sample_count;
  o.transcription_substeps = substeps;
  TakeoffPlan plan = decode(d, rest(RobotParams{}), gamma, RobotParams{}, o);
  return plan;
}

TEST(Replay, HoverStaysAtInitialPose) {
  const RobotParams p;
  const PlanarState s0 = rest(p);
  const TakeoffPlan plan = decode(hover_decision(s0, 0.3, 0.05, p.gravity), s0, false, p);
  const ReplayReport r = replay(plan, p);
  EXPECT_LT(r.terminal_error.maxCoeff(), 1e-6);
  for (const ReplaySample& s : r.samples) {
    if (s.phase_id != 1) continue;
    EXPECT_NEAR(s.state.x, s0.x, 1e-6);
    EXPECT_NEAR(s.state.z, s0.z, 1e-6);
    EXPECT_NEAR(s.state.theta, s0.theta, 1e-6);
  }
}

TEST(Replay, StepIsCappedByFirstPhase) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  ReplayOptions o;
  o.dt = 0.1;
  const ReplayReport r = replay(plan, RobotParams{}, o);
  EXPECT_LE(r.dt_used, plan.phase.t1 / 50.0 + 1e-15);
}

TEST(Replay, FlightFollowsClosedFormParabola) {
  const RobotParams p;
  const TakeoffPlan plan = decoded(forward_hop(), false);
  const ReplayReport r = replay(plan, p);
  const ReplaySample* takeoff = nullptr;
  for (const ReplaySample& s : r.samples) {
    if (s.phase_id == 3) {
      takeoff = &s;
      break;
    }
  }
  ASSERT_NE(takeoff, nullptr);
  EXPECT_NEAR(takeoff->t, plan.phase.t2, 1e-12);
  for (const ReplaySample& s : r.samples) {
    if (s.phase_id != 3) continue;
    const double T = s.t - takeoff->t;
    EXPECT_NEAR(s.state.x, takeoff->state.x + takeoff->state.vx * T, 1e-9);
    EXPECT_NEAR(s.state.z, takeoff->state.z + takeoff->state.vz * T - 0.5 * p.gravity * T * T, 1e-9);
    EXPECT_NEAR(s.state.theta, takeoff->state.theta + takeoff->state.omega * T, 1e-9);
  }
  EXPECT_LT(r.flight_invariant_drift, 1e-9);
}

TEST(Replay, ApexBoundsKeyframeHeights) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  const ReplayReport r = replay(plan, RobotParams{});
  double z_t2 = 0.0;
  for (const ReplaySample& s : r.samples) {
    if (s.phase_id == 3) {
      z_t2 = s.state.z;
      break;
    }
  }
  EXPECT_GE(r.apex_height, std::max(z_t2, r.terminal_state.z) - 1e-12);
}

TEST(Replay, TracksDecodedTrajectoryAtTakeoff) {
  const RobotParams p;
  const TakeoffPlan plan = decoded(forward_hop(), false);
  const ReplayReport r = replay(plan, p);
  for (const ReplaySample& s : r.samples) {
    if (s.phase_id != 3) continue;
    EXPECT_NEAR(s.state.x, plan.takeoff_state.x, 1e-3);
    EXPECT_NEAR(s.state.z, plan.takeoff_state.z, 1e-3);
    break;
  }
}

TEST(Replay, TranscriptionGapShrinksWithSampling) {
  const RobotParams p;
  auto gap = [&](int samples) {
    const TakeoffPlan plan = decoded(forward_hop(), false, samples, 1);
    const ReplayReport r = replay(plan, p);
    return (r.terminal_state.pose() - plan.terminal_state.pose()).norm();
  };
  const double coarse = gap(11);
  const double mid = gap(41);
  const double fine = gap(161);
  EXPECT_LT(mid, coarse);
  EXPECT_LT(fine, mid);
}

TEST(Replay, IsDeterministic) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  const ReplayReport a = replay(plan, RobotParams{});
  const ReplayReport b = replay(plan, RobotParams{});
  EXPECT_EQ(a.terminal_state, b.terminal_state);
  EXPECT_EQ(a.samples.size(), b.samples.size());
}

TEST(ConstraintAudit, CleanHopPassesAtDefaults) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  PlannerConfig cfg;
  cfg.limits.tau_max = 60.0;
  const PlanConstraints c = cfg.constraints(RobotParams{});
  const ConstraintAudit a = constraint_audit(plan, RobotParams{}, c);
  EXPECT_TRUE(a.pass()) << "torque " << a.max_violation[5] << " friction " << a.max_violation[2];
}

TEST(ConstraintAudit, OneNewtonMeterFlagsTorque) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  PlanConstraints c = PlannerConfig{}.constraints(RobotParams{});
  c.limits.tau_max = 1.0;
  const ConstraintAudit a = constraint_audit(plan, RobotParams{}, c);
  EXPECT_TRUE(a.flagged(PenaltyClass::JointTorque));
  EXPECT_FALSE(a.pass());
}

TEST(ConstraintAudit, LowFrictionFlagsForwardMotion) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  PlanConstraints c = PlannerConfig{}.constraints(RobotParams{});
  c.mu = 0.01;
  const ConstraintAudit a = constraint_audit(plan, RobotParams{}, c);
  EXPECT_TRUE(a.flagged(PenaltyClass::Friction));
}

TEST(ConstraintAudit, MatchesReplayAudit) {
  const TakeoffPlan plan = decoded(forward_hop(), false);
  const PlanConstraints c = PlannerConfig{}.constraints(RobotParams{});
  const ConstraintAudit a = constraint_audit(plan, RobotParams{}, c);
  const ReplayReport r = replay(plan, RobotParams{}, c);
  EXPECT_EQ(a.max_violation, r.audit.max_violation);
}

}  // namespace
}  // namespace wljump
