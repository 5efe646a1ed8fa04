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

#include "wljump/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wljump/planar_dynamics.hpp"

namespace wljump {

namespace {

struct ForcePair {
  Vec2 hind = Vec2::Zero();
  Vec2 front = Vec2::Zero();
};

// Piecewise-linear force profile over one take-off phase.
ForcePair interpolate(const std::vector<TakeoffSample>& samples, double t) {
  if (samples.empty()) return {};
  if (t <= samples.front().t) return {samples.front().f_hind, samples.front().f_front};
  if (t >= samples.back().t) return {samples.back().f_hind, samples.back().f_front};
  const auto hi = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double v, const TakeoffSample& s) { return v < s.t; });
  const auto lo = hi - 1;
  const double span = hi->t - lo->t;
  const double w = span > 0.0 ? (t - lo->t) / span : 0.0;
  return {lo->f_hind + w * (hi->f_hind - lo->f_hind), lo->f_front + w * (hi->f_front - lo->f_front)};
}

class Auditor {
 public:
  Auditor(const RobotParams& params, const PlanConstraints& c) : params_(params), c_(c) {
    audit_.tolerance = c.tolerance;
  }

  void note(PenaltyClass k, double v, double t) {
    const int i = static_cast<int>(k);
    if (v > audit_.max_violation[i]) {
      audit_.max_violation[i] = v;
      audit_.worst_time[i] = t;
    }
  }

  // Checks one instant; fills the leg samples of out.
  void check(ReplaySample& out) {
    const double t = out.t;
    note(PenaltyClass::BodyHeight, c_.z_min - out.state.z, t);
    for (LegSide side : kLegSides) {
      const int li = static_cast<int>(side);
      if (!out.in_contact[li]) continue;
      const Vec2& f = li == 0 ? out.f_hind : out.f_front;
      note(PenaltyClass::ContactForce, c_.f_z_min - f.y(), t);
      note(PenaltyClass::Friction, std::abs(f.x()) - c_.mu * f.y(), t);

      LegSample& leg = out.legs[li];
      leg = evaluate_leg(out.state, side, f, params_, c_.knee_branch);
      if (!leg.reachable) {
        note(PenaltyClass::JointAngle, leg.reach_excess, t);
        continue;
      }
      for (double q : {leg.joints.q_hip, leg.joints.q_knee}) {
        note(PenaltyClass::JointAngle, std::max(q - c_.limits.q_max, c_.limits.q_min - q), t);
      }
      if (leg.nonsingular) {
        note(PenaltyClass::JointVelocity, std::abs(leg.joints.qd_hip) - c_.limits.qd_max, t);
        note(PenaltyClass::JointVelocity, std::abs(leg.joints.qd_knee) - c_.limits.qd_max, t);
        peak_velocity_.x() = std::max(peak_velocity_.x(), std::abs(leg.joints.qd_hip));
        peak_velocity_.y() = std::max(peak_velocity_.y(), std::abs(leg.joints.qd_knee));
      } else {
        note(PenaltyClass::JointVelocity, c_.limits.qd_max, t);
      }
      note(PenaltyClass::JointTorque, std::abs(leg.torque.x()) - c_.limits.tau_max, t);
      note(PenaltyClass::JointTorque, std::abs(leg.torque.y()) - c_.limits.tau_max, t);
      peak_torque_.x() = std::max(peak_torque_.x(), std::abs(leg.torque.x()));
      peak_torque_.y() = std::max(peak_torque_.y(), std::abs(leg.torque.y()));
    }
  }

  [[nodiscard]] const ConstraintAudit& audit() const { return audit_; }
  [[nodiscard]] const Vec2& peak_torque() const { return peak_torque_; }
  [[nodiscard]] const Vec2& peak_velocity() const { return peak_velocity_; }

 private:
  const RobotParams& params_;
  const PlanConstraints& c_;
  ConstraintAudit audit_;
  Vec2 peak_torque_ = Vec2::Zero();
  Vec2 peak_velocity_ = Vec2::Zero();
};

int steps_for(double duration, double dt) {
  return std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-9)));
}

}  // namespace

bool ConstraintAudit::pass() const {
  for (int i = 1; i < kPenaltyClassCount; ++i) {
    if (flagged(static_cast<PenaltyClass>(i))) return false;
  }
  return true;
}

ReplayReport replay(const TakeoffPlan& plan, const RobotParams& params, const ReplayOptions& options) {
  return replay(plan, params, plan.constraints, options);
}

ReplayReport replay(const TakeoffPlan& plan, const RobotParams& params, const PlanConstraints& constraints,
                    const ReplayOptions& options) {
  if (!(options.dt > 0.0)) throw std::invalid_argument("replay: dt must be > 0");
  if (options.record_every < 1) throw std::invalid_argument("replay: record_every must be >= 1");
  const PhaseSchedule& ph = plan.phase;
  if (!(ph.t1 > 0.0) || ph.t2 < ph.t1 || ph.t3 < ph.t2) {
    throw std::invalid_argument("replay: plan has an invalid phase schedule");
  }
  const double dt = std::min(options.dt, ph.t1 / 50.0);

  ReplayReport report;
  Auditor auditor(params, constraints);
  PlanarState state = plan.initial;
  report.apex_height = state.z;

  struct Phase {
    int id;
    double start;
    double end;
    const std::vector<TakeoffSample>* samples;
    std::array<bool, 2> contact;
  };
  std::vector<Phase> phases;
  phases.push_back({1, 0.0, ph.t1, &plan.step1_samples, {true, true}});
  if (ph.t2 > ph.t1) phases.push_back({2, ph.t1, ph.t2, &plan.step2_samples, {true, false}});
  phases.push_back({3, ph.t2, ph.t3, nullptr, {false, false}});

  double flight_invariant = 0.0;
  auto invariant = [&](const PlanarState& s) { return s.vz * s.vz + 2.0 * params.gravity * s.z; };

  long step_index = 0;
  auto visit = [&](const Phase& p, double t, bool force_record) {
    ReplaySample s;
    s.t = t;
    s.phase_id = p.id;
    s.state = state;
    s.in_contact = p.contact;
    if (p.samples) {
      const ForcePair f = interpolate(*p.samples, t);
      s.f_hind = f.hind;
      s.f_front = p.contact[1] ? f.front : Vec2::Zero();
    }
    auditor.check(s);
    if (state.z > report.apex_height) {
      report.apex_height = state.z;
      report.apex_time = t;
    }
    if (p.id == 3) {
      report.flight_invariant_drift =
          std::max(report.flight_invariant_drift, std::abs(invariant(state) - flight_invariant));
    }
    if (force_record || step_index % options.record_every == 0) report.samples.push_back(s);
  };

  for (const Phase& p : phases) {
    const double duration = p.end - p.start;
    const int n = steps_for(duration, dt);
    const double h = duration / n;
    report.dt_used = std::max(report.dt_used, h);
    if (p.id == 3) flight_invariant = invariant(state);

    const WrenchInputFn input = [&](double t, const PlanarState& s) {
      PlanarWrenchInput in;
      in.p_hind = contact_point(s, LegSide::Hind, params);
      in.p_front = contact_point(s, LegSide::Front, params);
      if (p.samples) {
        const ForcePair f = interpolate(*p.samples, t);
        in.f_hind = f.hind;
        if (p.contact[1]) in.f_front = f.front;
      }
      return in;
    };

    for (int k = 0; k < n; ++k) {
      const double t = p.start + k * h;
      visit(p, t, k == 0);
      state = step_rk4(state, input, params, t, h);
      ++step_index;
    }
    if (p.id == 3) visit(p, p.end, true);
  }

  report.terminal_state = state;
  report.terminal_error = (state.pose() - plan.target.pose()).cwiseAbs();
  report.audit = auditor.audit();
  for (double& v : report.audit.max_violation) v = std::max(v, 0.0);
  report.peak_torque = auditor.peak_torque();
  report.peak_velocity = auditor.peak_velocity();
  return report;
}

ConstraintAudit constraint_audit(const TakeoffPlan& plan, const RobotParams& params,
                                 const PlanConstraints& constraints, double dt) {
  ReplayOptions options;
  options.dt = dt;
  options.record_every = 1 << 30;
  return replay(plan, params, constraints, options).audit;
}

}  // namespace wljump
