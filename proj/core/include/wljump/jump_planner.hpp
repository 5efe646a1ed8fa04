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

// Keyframe-based jump trajectory optimisation.
//
// The decision vector holds three CoM keyframes (at t1/2, t2 and t3) and the
// phase times. decode() turns it into a take-off plan whose ground reaction
// forces follow the polynomial input family
//
//   u(t) = a1 t + a0               on [0, t1]   (all legs)
//   u(t) = b2 t^2 + b1 t + b0      on [t1, t2]  (hind legs, gamma = 1)
//   u(t) = 0                       on [t2, t3]  (flight)
//
// CoM x and z are polynomials through the keyframes, and the take-off
// velocity is chosen so the ballistic arc from the t2 keyframe reaches the t3
// keyframe. The only force freedom left after that is the front-minus-hind
// vertical force split during step 1; it is affine in t and its two
// coefficients are solved (damped Newton on an explicit-Euler transcription
// of the pitch equation) so that theta(t1/2) and the ballistic theta(t3) hit
// their keyframes.
//
// evaluate_penalties() scores a plan with
//   cost = sum_n W_n (10^(n+3) + 10^n sigma_n) + zeta
// over seven constraint classes, and solve() minimises that cost with DE.
#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wljump/differential_evolution.hpp"
#include "wljump/leg_model.hpp"
#include "wljump/robot_geometry.hpp"
#include "wljump/types.hpp"

namespace wljump {

/// Desired CoM pose at the end of flight (t3).
struct JumpTarget {
  double x = 0.0;
  double z = 0.0;
  double theta = 0.0;

  void validate() const;
  [[nodiscard]] Vec3 pose() const { return {x, z, theta}; }
};

struct DecisionVector {
  Vec3 s_half_t1 = Vec3::Zero();  // (x, z, theta) at t1 / 2
  Vec3 s_t2 = Vec3::Zero();       // at t2 (end of take-off)
  Vec3 s_t3 = Vec3::Zero();       // at t3 (end of flight)
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  /// 0 < t1 <= t2 < t3, all entries finite.
  void validate() const;
};

enum class PenaltyClass : int {
  Terminal = 0,
  ContactForce,
  Friction,
  JointAngle,
  JointVelocity,
  JointTorque,
  BodyHeight,
};
inline constexpr int kPenaltyClassCount = 7;

std::string_view to_string(PenaltyClass c);

/// How W_n is read: a binary violation indicator, or a constant 1.
enum class PenaltyWeighting { Indicator, Constant };

struct PenaltyReport {
  std::array<double, kPenaltyClassCount> sigma{};
  std::array<int, kPenaltyClassCount> weight{};
  double zeta = 0.0;
  double total_cost = 0.0;

  [[nodiscard]] double sigma_of(PenaltyClass c) const { return sigma[static_cast<int>(c)]; }
  [[nodiscard]] int weight_of(PenaltyClass c) const { return weight[static_cast<int>(c)]; }
  /// True when no class is violated (all sigma within tolerance).
  [[nodiscard]] bool feasible() const { return violated_mask == 0; }

  unsigned violated_mask = 0;  // bit n set when sigma_n > tolerance
};

/// Assembles the total cost from sigma and zeta. Exposed for tests.
PenaltyReport assemble_penalty(const std::array<double, kPenaltyClassCount>& sigma, double zeta,
                               double tolerance, PenaltyWeighting weighting);

/// Per-coordinate box for the DE genome. Keyframe x is searched within
/// keyframe_dx of the initial x.
struct JumpSearchBounds {
  double keyframe_dx = 1.5;
  double z_lo = 0.1;
  double z_hi = 1.2;
  double theta_lo = -std::numbers::pi;
  double theta_hi = 3.0 * std::numbers::pi;
  double t1_lo = 0.05;
  double t1_hi = 0.5;
  double step2_lo = 0.0;  // gamma = 1 raises this to at least kMinStep2Duration
  double step2_hi = 0.3;
  double flight_lo = 0.05;
  double flight_hi = 1.0;

  void validate() const;
};

inline constexpr double kMinStep2Duration = 0.02;

/// The constraint settings a plan was scored with. Stored in the plan so a
/// replay can audit against the same limits.
struct PlanConstraints {
  double mu = 0.7;
  double f_z_min = 1.0;
  double z_min = 0.115;
  JointLimits limits;
  double tolerance = 1e-6;
  KneeBranch knee_branch = KneeBranch::Backward;

  /// Copy with the joint limits and the height floor pulled inward by the
  /// relative margin. Contact force limits are left as they are.
  [[nodiscard]] PlanConstraints tightened(double margin) const;
};

struct PlannerConfig {
  double mu = 0.7;
  double f_z_min = 1.0;                // [N]
  std::optional<double> z_min;         // [m]; defaults to wheel_radius + 0.03
  int sample_count = 41;               // samples per take-off phase (odd keeps t1/2 on the grid)
  int transcription_substeps = 16;     // Euler steps per sample interval
  JointLimits limits;
  de::DEConfig de;
  int restarts = 1;
  bool gamma = false;
  JumpSearchBounds bounds;
  double violation_tolerance = 1e-6;
  double limit_margin = 0.02;          // relative tightening used while scoring
  PenaltyWeighting weighting = PenaltyWeighting::Indicator;
  KneeBranch knee_branch = KneeBranch::Backward;
  std::optional<DecisionVector> initial_guess;  // injected into the first DE population

  void validate() const;
  [[nodiscard]] PlanConstraints constraints(const RobotParams& params) const;
};

/// CoM x/z polynomial on one take-off step, in local time tau = t - t_start.
struct ComSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::array<double, 5> x{};
  std::array<double, 5> z{};

  /// Position, velocity and acceleration at absolute time t.
  [[nodiscard]] Vec2 position(double t) const;
  [[nodiscard]] Vec2 velocity(double t) const;
  [[nodiscard]] Vec2 acceleration(double t) const;
};

struct TakeoffSample {
  double t = 0.0;
  int phase = 1;  // 1 or 2
  PlanarState state;
  Vec2 f_hind = Vec2::Zero();   // pair totals, world frame
  Vec2 f_front = Vec2::Zero();
  double torque_residual = 0.0;
  std::array<bool, 2> in_contact{};  // indexed by LegSide
  std::array<LegSample, 2> legs{};   // one real leg of each pair
};

struct FlightSample {
  double t = 0.0;
  PlanarState state;
};

struct TakeoffPlan {
  PhaseSchedule phase;
  DecisionVector decision;
  PlanarState initial;
  JumpTarget target;
  PlanConstraints constraints;

  ComSegment step1;
  ComSegment step2;  // empty (t_start == t_end) without step 2
  double split_offset = 0.0;  // front-minus-hind vertical force at t = 0 [N]
  double split_rate = 0.0;    // its slope [N/s]
  double pitch_residual = 0.0;
  int pitch_iterations = 0;

  std::vector<TakeoffSample> step1_samples;
  std::vector<TakeoffSample> step2_samples;
  std::vector<FlightSample> flight_samples;

  PlanarState takeoff_state;   // at t2
  PlanarState terminal_state;  // ballistic at t3
  double energy_zeta = 0.0;
  double x_roll = 0.0;  // CoM x travel before flight

  PenaltyReport penalties;
};

struct DecodeOptions {
  int sample_count = 41;
  int transcription_substeps = 16;
  KneeBranch knee_branch = KneeBranch::Backward;
};

/// Builds the take-off plan for a decision. Kinematic infeasibility is
/// recorded in the leg samples, never thrown. Throws std::invalid_argument
/// when the decision violates its time ordering.
TakeoffPlan decode(const DecisionVector& decision, const PlanarState& initial, bool gamma,
                   const RobotParams& params, const DecodeOptions& options = {});

struct ContactPoint {
  LegSide side = LegSide::Hind;
  Vec2 position = Vec2::Zero();
};

struct ForceDistribution {
  Vec2 f_hind = Vec2::Zero();
  Vec2 f_front = Vec2::Zero();
  double torque_residual = 0.0;
  bool infeasible = false;  // no contact but a nonzero wrench was requested
};

/**
 * Splits a planar net wrench (about p_com) over the active contacts.
 *
 * Two contacts: minimum-norm solution of the three wrench equations in four
 * force unknowns. One contact: that contact takes the whole net force and the
 * torque it cannot produce is returned as torque_residual.
 */
ForceDistribution distribute_forces(const Vec2& net_force, double net_torque,
                                    std::span<const ContactPoint> contacts, const Vec2& p_com);

/// Scores a decoded plan against the target and the constraint settings.
PenaltyReport evaluate_penalties(const TakeoffPlan& plan, const JumpTarget& target,
                                 const PlannerConfig& config, const RobotParams& params);

/// Genome layout used by solve(): [s_half(3), s_t2(3), t1, t2 - t1, t3 - t2].
inline constexpr int kGenomeSize = 9;

de::SearchSpace jump_search_space(const JumpSearchBounds& bounds, const PlanarState& initial,
                                  bool gamma);
DecisionVector decision_from_genome(const Eigen::VectorXd& genome, const JumpTarget& target,
                                    bool gamma);
Eigen::VectorXd genome_from_decision(const DecisionVector& decision);

/// decode + evaluate_penalties with the config's sampling options.
TakeoffPlan decode_and_score(const DecisionVector& decision, const PlanarState& initial,
                             const JumpTarget& target, const RobotParams& params,
                             const PlannerConfig& config);

struct JumpSolution {
  TakeoffPlan plan;
  de::DEResult search;

  [[nodiscard]] bool feasible() const { return plan.penalties.feasible(); }
};

/// Runs DE over the genome. Always returns the best plan found; feasibility
/// is reported, not enforced.
JumpSolution solve(const PlanarState& initial, const JumpTarget& target, const RobotParams& params,
                   const PlannerConfig& config);

}  // namespace wljump
