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

// Rolling locomotion on flat ground: wheel torque law, a receding-horizon
// velocity-tracking planner, and the swing/contact foot predicates.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wljump/differential_evolution.hpp"
#include "wljump/leg_model.hpp"
#include "wljump/types.hpp"

namespace wljump {

struct RollingState {
  double x = 0.0;
  double vx = 0.0;
  double wheel_omega = 0.0;        // [rad/s], same for both pairs
  Vec2 normal_loads = Vec2::Zero();  // (hind, front) pair totals [N]

  void validate() const;
};

struct MPCConfig {
  double horizon = 1.0;        // [s]
  double dt = 0.015;           // [s] prediction step
  double control_rate = 50.0;  // [Hz]
  double velocity_weight = 1.0;
  double force_weight = 1e-6;  // [1/N^2]
  double wheel_gain = 15.0;    // K_d [N s/m]
  double mu = 0.7;
  int blocks = 5;              // piecewise-constant force blocks over the horizon
  de::DEConfig solver = {.population_size = 20,
                         .differential_weight = 0.7,
                         .crossover_rate = 0.9,
                         .max_generations = 60,
                         .target_cost = 0.0,
                         .seed = 1,
                         .threads = 1};
  double sim_dt = 0.001;       // plant integration step for closed-loop runs [s]

  void validate() const;
  [[nodiscard]] int steps() const;
};

/// Wheel actuator limits (same motor as the leg joints).
struct WheelLimits {
  double tau_max = 42.0;   // [Nm]
  double qd_max = 40.0;    // [rad/s]

  [[nodiscard]] double speed_cap(double wheel_radius) const { return qd_max * wheel_radius; }
};

/// tau = K_d (v_desired - v_current) + f_t * r_wheel, clamped to +-tau_max.
double wheel_torque(double v_desired, double v_current, double f_tangential, double wheel_gain,
                    const RobotParams& params, const WheelLimits& limits = {});

struct VelocityPlan {
  std::vector<double> forces;        // total tangential force per prediction step [N]
  std::vector<double> predicted_vx;  // steps + 1 entries, starting at the current vx
  double cost = 0.0;
};

/// Cost of a force sequence under the planner's prediction model.
double velocity_tracking_cost(const std::vector<double>& forces, double vx0, double v_desired,
                              const MPCConfig& config, const RobotParams& params,
                              const WheelLimits& limits, std::vector<double>* predicted = nullptr);

/**
 * Minimises sum_k w_v (vx_k - v_desired)^2 + w_f f_k^2 over the horizon subject
 * to vx_{k+1} = vx_k + dt f_k / m, |f_k| <= mu m g (mu m g / 2 per axle) and
 * |vx| <= qd_max * r_wheel. Solved by DE over move-blocked inputs.
 * warm_start, when non-empty, is a previous VelocityPlan::forces sequence.
 */
VelocityPlan plan_velocity_mpc(const RollingState& state, double v_desired, const MPCConfig& config,
                               const RobotParams& params, const WheelLimits& limits = {},
                               const std::vector<double>& warm_start = {});

struct RollingSample {
  double t = 0.0;
  double x = 0.0;
  double vx = 0.0;
  double wheel_omega = 0.0;
  double traction_force = 0.0;  // total applied [N]
  double wheel_torque = 0.0;    // per wheel [Nm]
};

struct RollingTrajectory {
  std::vector<RollingSample> samples;
  [[nodiscard]] double max_vx() const;
};

/// Closed loop: re-plans at control_rate, tracks with the wheel torque law and
/// integrates the plant at sim_dt for the given duration.
RollingTrajectory simulate_rolling(double v_desired, double duration, const RobotParams& params,
                                   const MPCConfig& config, const WheelLimits& limits = {},
                                   const RollingState& start = {});

class SpeedSaturation : public std::runtime_error {
 public:
  SpeedSaturation(double requested, double cap);
  [[nodiscard]] double requested() const { return requested_; }
  [[nodiscard]] double cap() const { return cap_; }

 private:
  double requested_;
  double cap_;
};

struct RollingHandoff {
  RollingTrajectory trajectory;
  PlanarState handoff;  // state passed to the jump planner
  double handoff_time = 0.0;
  double wheel_omega = 0.0;
  bool converged = false;
};

inline constexpr double kHandoffBand = 0.05;   // [m/s]
inline constexpr double kHandoffHold = 0.2;    // [s]

/**
 * Rolls from rest until |vx - v_target| < 0.05 m/s has held for 0.2 s, or
 * max_time elapses. Throws SpeedSaturation when v_target exceeds the wheel
 * speed cap.
 */
RollingHandoff simulate_rolling_to_speed(double v_target, const RobotParams& params,
                                         const MPCConfig& config, const WheelLimits& limits = {},
                                         double max_time = 10.0);

struct ContactCheck {
  bool normal_velocity_ok = false;
  bool lateral_velocity_ok = false;
  bool friction_ok = false;
  bool unilateral_ok = false;

  [[nodiscard]] bool pass() const {
    return normal_velocity_ok && lateral_velocity_ok && friction_ok && unilateral_ok;
  }
};

/// Vectors are in contact-frame coordinates (t, n, b): rolling direction,
/// surface normal, binormal. Rolling speed along t is unconstrained.
ContactCheck contact_constraint_check(const Vec3& foot_velocity, const Vec3& force, double mu,
                                      double velocity_tolerance = 1e-6);

struct SwingCheck {
  bool force_free = false;
  bool velocity_ok = false;

  [[nodiscard]] bool pass() const { return force_free && velocity_ok; }
};

SwingCheck swing_constraint_check(double foot_velocity_normal, double desired, const Vec3& force,
                                  double velocity_tolerance = 0.05);

}  // namespace wljump
