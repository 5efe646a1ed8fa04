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

// Planar two-link leg (hip flexion + knee) kinematics and statics.
//
// Zero pose is the leg pointing straight down. q_hip rotates the whole leg
// toward +x, q_knee is the interior deflection of the lower link relative to
// the upper one. Foot positions are wheel centers in the hip frame (body axes).
#pragma once

#include <optional>
#include <stdexcept>

#include "wljump/robot_geometry.hpp"
#include "wljump/types.hpp"

namespace wljump {

struct LegGeometry {
  double upper_length = 0.2;
  double lower_length = 0.2;
  double hip_offset_x = 0.0;
  double wheel_radius = 0.085;

  void validate() const;
  [[nodiscard]] double reach() const { return upper_length + lower_length; }
};

LegGeometry leg_geometry(const RobotParams& params, LegSide side);

struct JointState {
  double q_hip = 0.0;
  double q_knee = 0.0;
  double qd_hip = 0.0;
  double qd_knee = 0.0;
};

struct JointLimits {
  double q_min = -2.6;
  double q_max = 2.6;
  double qd_max = 40.0;
  double tau_max = 42.0;

  void validate() const;
};

/// Knee-backward puts the knee behind the hip-foot line (q_knee >= 0).
enum class KneeBranch { Backward, Forward };

/// Below this |det J| the leg is treated as singular [m^2/rad].
inline constexpr double kSingularityTolerance = 1e-6;

class OutOfWorkspace : public std::runtime_error {
 public:
  explicit OutOfWorkspace(double distance);
  [[nodiscard]] double distance() const { return distance_; }

 private:
  double distance_;
};

class SingularConfiguration : public std::runtime_error {
 public:
  explicit SingularConfiguration(double det);
  [[nodiscard]] double det() const { return det_; }

 private:
  double det_;
};

Vec2 forward_kinematics(const JointState& joints, const LegGeometry& geom);

/// Angles only; velocities in the result are zero. Throws OutOfWorkspace.
JointState inverse_kinematics(const Vec2& foot, const LegGeometry& geom,
                              KneeBranch branch = KneeBranch::Backward);
std::optional<JointState> try_inverse_kinematics(const Vec2& foot, const LegGeometry& geom,
                                                 KneeBranch branch = KneeBranch::Backward);

/// d(foot)/d(q_hip, q_knee).
Mat2 jacobian(const JointState& joints, const LegGeometry& geom);

/// tau = J^T (-f), with f the ground reaction force acting on the foot.
Vec2 static_torques(const JointState& joints, const LegGeometry& geom, const Vec2& foot_force);

/// qd = J^-1 v. Throws SingularConfiguration when |det J| < kSingularityTolerance.
Vec2 joint_velocities(const JointState& joints, const LegGeometry& geom, const Vec2& foot_velocity);
std::optional<Vec2> try_joint_velocities(const JointState& joints, const LegGeometry& geom,
                                         const Vec2& foot_velocity);

/// One real leg of a virtual leg pair evaluated at a body state.
struct LegSample {
  bool reachable = false;     // IK succeeded
  bool nonsingular = false;   // joint velocities defined
  double reach_excess = 0.0;  // distance outside the annular workspace when unreachable [m]
  JointState joints;
  Vec2 torque = Vec2::Zero();  // (hip, knee) [Nm]
};

/// Evaluates one real leg carrying half of pair_force (world frame GRF).
LegSample evaluate_leg(const PlanarState& state, LegSide side, const Vec2& pair_force,
                       const RobotParams& params, KneeBranch branch = KneeBranch::Backward);

}  // namespace wljump
