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

#include "wljump/leg_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

namespace wljump {

namespace {

constexpr double kReachSlack = 1e-12;

}  // namespace

OutOfWorkspace::OutOfWorkspace(double distance)
    : std::runtime_error("foot target outside leg workspace (distance " + std::to_string(distance) +
                         " m)"),
      distance_(distance) {}

SingularConfiguration::SingularConfiguration(double det)
    : std::runtime_error("leg Jacobian is singular (|det J| = " + std::to_string(det) + ")"),
      det_(det) {}

void LegGeometry::validate() const {
  if (!(upper_length > 0.0)) throw std::invalid_argument("upper_length: must be > 0");
  if (!(lower_length > 0.0)) throw std::invalid_argument("lower_length: must be > 0");
}

void JointLimits::validate() const {
  if (!(q_min < q_max)) throw std::invalid_argument("q_min: must be < q_max");
  if (!(qd_max > 0.0)) throw std::invalid_argument("qd_max: must be > 0");
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max: must be > 0");
}

LegGeometry leg_geometry(const RobotParams& params, LegSide side) {
  return {params.link_length_upper, params.link_length_lower, hip_offset_x(side, params),
          params.wheel_radius};
}

Vec2 forward_kinematics(const JointState& joints, const LegGeometry& geom) {
  const double a1 = joints.q_hip;
  const double a12 = joints.q_hip + joints.q_knee;
  return {geom.upper_length * std::sin(a1) + geom.lower_length * std::sin(a12),
          -geom.upper_length * std::cos(a1) - geom.lower_length * std::cos(a12)};
}

std::optional<JointState> try_inverse_kinematics(const Vec2& foot, const LegGeometry& geom,
                                                 KneeBranch branch) {
  const double l1 = geom.upper_length;
  const double l2 = geom.lower_length;
  const double r = foot.norm();
  if (r > l1 + l2 + kReachSlack || r < std::abs(l1 - l2) - kReachSlack) return std::nullopt;

  const double c2 = std::clamp((r * r - l1 * l1 - l2 * l2) / (2.0 * l1 * l2), -1.0, 1.0);
  double q2 = std::acos(c2);
  if (branch == KneeBranch::Forward) q2 = -q2;

  // Angle of the foot measured from straight down, positive toward +x.
  const double foot_angle = std::atan2(foot.x(), -foot.y());
  const double offset = std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));

  JointState out;
  out.q_hip = foot_angle - offset;
  out.q_knee = q2;
  return out;
}

JointState inverse_kinematics(const Vec2& foot, const LegGeometry& geom, KneeBranch branch) {
  if (auto joints = try_inverse_kinematics(foot, geom, branch)) return *joints;
  const double r = foot.norm();
  const double outer = r - geom.reach();
  const double inner = std::abs(geom.upper_length - geom.lower_length) - r;
  throw OutOfWorkspace(std::max(outer, inner));
}

Mat2 jacobian(const JointState& joints, const LegGeometry& geom) {
  const double a1 = joints.q_hip;
  const double a12 = joints.q_hip + joints.q_knee;
  const double l1 = geom.upper_length;
  const double l2 = geom.lower_length;
  Mat2 j;
  j << l1 * std::cos(a1) + l2 * std::cos(a12), l2 * std::cos(a12),
      l1 * std::sin(a1) + l2 * std::sin(a12), l2 * std::sin(a12);
  return j;
}

Vec2 static_torques(const JointState& joints, const LegGeometry& geom, const Vec2& foot_force) {
  return -(jacobian(joints, geom).transpose() * foot_force);
}

std::optional<Vec2> try_joint_velocities(const JointState& joints, const LegGeometry& geom,
                                         const Vec2& foot_velocity) {
  const Mat2 j = jacobian(joints, geom);
  const double det = j.determinant();
  if (std::abs(det) < kSingularityTolerance) return std::nullopt;
  // Explicit 2x2 inverse.
  return Vec2((j(1, 1) * foot_velocity.x() - j(0, 1) * foot_velocity.y()) / det,
              (-j(1, 0) * foot_velocity.x() + j(0, 0) * foot_velocity.y()) / det);
}

Vec2 joint_velocities(const JointState& joints, const LegGeometry& geom, const Vec2& foot_velocity) {
  if (auto qd = try_joint_velocities(joints, geom, foot_velocity)) return *qd;
  throw SingularConfiguration(std::abs(jacobian(joints, geom).determinant()));
}

LegSample evaluate_leg(const PlanarState& state, LegSide side, const Vec2& pair_force,
                       const RobotParams& params, KneeBranch branch) {
  const LegGeometry geom = leg_geometry(params, side);
  const Vec2 foot = foot_in_body(state, side, params);

  LegSample sample;
  const auto joints = try_inverse_kinematics(foot, geom, branch);
  if (!joints) {
    const double r = foot.norm();
    sample.reach_excess =
        std::max(r - geom.reach(), std::abs(geom.upper_length - geom.lower_length) - r);
    return sample;
  }
  sample.reachable = true;
  sample.joints = *joints;

  const Vec2 force_body = rotation(state.theta).transpose() * (0.5 * pair_force);
  sample.torque = static_torques(sample.joints, geom, force_body);

  if (auto qd = try_joint_velocities(sample.joints, geom, foot_velocity_in_body(state, side, params))) {
    sample.nonsingular = true;
    sample.joints.qd_hip = qd->x();
    sample.joints.qd_knee = qd->y();
  }
  return sample;
}

}  // namespace wljump
