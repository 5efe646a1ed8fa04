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

// Shared domain types for the planar wheeled-legged jump model.
#pragma once

#include <Eigen/Core>

namespace wljump {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

/**
 * @brief Planar description of the robot body and its legs.
 *
 * The body is a single rigid body moving in the sagittal (x-z) plane. Each
 * leg pair (hind, front) collapses into one virtual two-link leg whose hip
 * sits body_half_length behind/ahead of the CoM along the body x axis.
 * Legs are massless.
 */
struct RobotParams {
  double mass = 22.5;                // [kg]
  double pitch_inertia = 0.55;       // [kg m^2], box estimate m(a^2+b^2)/12
  double body_half_length = 0.20;    // [m] hip x-offset from CoM
  double hip_height_nominal = 0.30;  // [m] CoM height in the crouched stance
  double wheel_radius = 0.085;       // [m]
  double link_length_upper = 0.20;   // [m]
  double link_length_lower = 0.20;   // [m]
  double gravity = 9.81;             // [m/s^2], acts in -z

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// CoM pose and rates in the x-z plane. theta is body pitch, positive nose-up
/// (counter-clockwise seen from +y looking along -y).
struct PlanarState {
  double x = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double vx = 0.0;
  double vz = 0.0;
  double omega = 0.0;

  [[nodiscard]] bool finite() const;
  [[nodiscard]] Vec3 pose() const { return {x, z, theta}; }

  friend bool operator==(const PlanarState&, const PlanarState&) = default;
};

/// Time derivative of a PlanarState.
struct PlanarStateRate {
  double x_dot = 0.0;
  double z_dot = 0.0;
  double theta_dot = 0.0;
  double vx_dot = 0.0;
  double vz_dot = 0.0;
  double omega_dot = 0.0;
};

/// state + h * rate, componentwise.
PlanarState advance(const PlanarState& state, const PlanarStateRate& rate, double h);

/// Total hind and front ground reaction forces and their contact points
/// (world frame). Contact points lie on the ground plane z = 0.
struct PlanarWrenchInput {
  Vec2 f_hind = Vec2::Zero();
  Vec2 f_front = Vec2::Zero();
  Vec2 p_hind = Vec2::Zero();
  Vec2 p_front = Vec2::Zero();
};

/// Take-off phase boundaries. Step 1 is [0, t1] with all legs on the ground,
/// step 2 is [t1, t2] with only the hind legs pushing (gamma = true), and
/// flight runs over [t2, t3].
struct PhaseSchedule {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  bool gamma = false;

  void validate() const;
  [[nodiscard]] bool has_step2() const { return gamma && t2 > t1; }
};

}  // namespace wljump
