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
#include <numbers>
#include <random>

#include <Eigen/LU>

#include <gtest/gtest.h>

#include "wljump/leg_model.hpp"
#include "wljump/robot_geometry.hpp"

namespace wljump {
namespace {

constexpr double kPi = std::numbers::pi;

LegGeometry geom() { return LegGeometry{0.2, 0.2, 0.0, 0.085}; }

Mat2 fd_jacobian(const JointState& j, const LegGeometry& g, double h = 1e-6) {
  Mat2 out;
  for (int c = 0; c < 2; ++c) {
    JointState a = j;
    JointState b = j;
    (c == 0 ? a.q_hip : a.q_knee) += h;
    (c == 0 ? b.q_hip : b.q_knee) -= h;
    out.col(c) = (forward_kinematics(a, g) - forward_kinematics(b, g)) / (2.0 * h);
  }
  return out;
}

TEST(LegGeometry, Validation) {
  EXPECT_NO_THROW(geom().validate());
  LegGeometry g = geom();
  g.upper_length = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  JointLimits lim;
  EXPECT_NO_THROW(lim.validate());
  lim.q_min = 3.0;
  EXPECT_THROW(lim.validate(), std::invalid_argument);
  lim = JointLimits{};
  lim.tau_max = 0.0;
  EXPECT_THROW(lim.validate(), std::invalid_argument);
}

TEST(JointLimits, HardwareDefaults) {
  const JointLimits lim;
  EXPECT_DOUBLE_EQ(lim.tau_max, 42.0);
  EXPECT_DOUBLE_EQ(lim.qd_max, 40.0);
  EXPECT_DOUBLE_EQ(lim.q_min, -2.6);
  EXPECT_DOUBLE_EQ(lim.q_max, 2.6);
}

TEST(ForwardKinematics, ZeroPoseStraightDown) {
  const Vec2 f = forward_kinematics(JointState{}, geom());
  EXPECT_NEAR(f.x(), 0.0, 1e-15);
  EXPECT_NEAR(f.y(), -0.4, 1e-15);
}

TEST(ForwardKinematics, FullyFoldedReturnsToHip) {
  const Vec2 f = forward_kinematics(JointState{0.3, kPi, 0, 0}, geom());
  EXPECT_NEAR(f.norm(), 0.0, 1e-15);
}

TEST(InverseKinematics, StraightDown) {
  const JointState j = inverse_kinematics({0.0, -0.4}, geom());
  EXPECT_NEAR(j.q_hip, 0.0, 1e-7);
  EXPECT_NEAR(j.q_knee, 0.0, 1e-7);
}

TEST(InverseKinematics, RightAngleKneeBothBranches) {
  const double r = 0.2 * std::sqrt(2.0);
  const JointState back = inverse_kinematics({0.0, -r}, geom(), KneeBranch::Backward);
  const JointState fwd = inverse_kinematics({0.0, -r}, geom(), KneeBranch::Forward);
  EXPECT_NEAR(back.q_knee, kPi / 2.0, 1e-12);
  EXPECT_NEAR(fwd.q_knee, -kPi / 2.0, 1e-12);
  // Equal links: the hip sits pi/4 off the vertical, opposite to the knee bend.
  EXPECT_NEAR(back.q_hip, -kPi / 4.0, 1e-12);
  EXPECT_NEAR(fwd.q_hip, kPi / 4.0, 1e-12);
}

TEST(InverseKinematics, BeyondReachThrows) {
  EXPECT_THROW(inverse_kinematics({0.0, -0.5}, geom()), OutOfWorkspace);
  EXPECT_FALSE(try_inverse_kinematics({0.0, -0.5}, geom()).has_value());
  try {
    inverse_kinematics({0.0, -0.5}, geom());
  } catch (const OutOfWorkspace& e) {
    EXPECT_NEAR(e.distance(), 0.1, 1e-12);
  }
}

TEST(InverseKinematics, InnerHoleForUnequalLinks) {
  const LegGeometry g{0.25, 0.15, 0.0, 0.085};
  EXPECT_THROW(inverse_kinematics({0.0, -0.05}, g), OutOfWorkspace);
}

TEST(InverseKinematics, RoundTripDenseSampleBothBranches) {
  for (const LegGeometry& g : {geom(), LegGeometry{0.22, 0.18, 0.0, 0.085}}) {
    const double rmin = std::abs(g.upper_length - g.lower_length) + 1e-3;
    const double rmax = g.reach() - 1e-6;
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double r = rmin + (rmax - rmin) * i / 40.0;
      for (int k = 0; k < 72; ++k) {
        const double a = 2.0 * kPi * k / 72.0;
        const Vec2 p{r * std::sin(a), -r * std::cos(a)};
        for (KneeBranch b : {KneeBranch::Backward, KneeBranch::Forward}) {
          const JointState j = inverse_kinematics(p, g, b);
          worst = std::max(worst, (forward_kinematics(j, g) - p).norm());
          if (b == KneeBranch::Backward) {
            EXPECT_GE(j.q_knee, 0.0);
          }
          if (b == KneeBranch::Forward) {
            EXPECT_LE(j.q_knee, 0.0);
          }
        }
      }
    }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(Jacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> q(-2.5, 2.5);
  for (int i = 0; i < 10; ++i) {
    const JointState j{q(rng), q(rng), 0, 0};
    const Mat2 err = jacobian(j, geom()) - fd_jacobian(j, geom());
    EXPECT_LT(err.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Jacobian, SingularWhenExtended) {
  EXPECT_NEAR(jacobian(JointState{0.4, 0.0, 0, 0}, geom()).determinant(), 0.0, 1e-15);
}

TEST(Jacobian, DeterminantAtRightAngleKnee) {
  const Mat2 J = jacobian(JointState{0.1, kPi / 2.0, 0, 0}, geom());
  EXPECT_NEAR(std::abs(J.determinant()), 0.2 * 0.2 * std::sin(kPi / 2.0), 1e-15);
  EXPECT_NEAR(std::abs(J.determinant()), 0.04, 1e-15);
}

TEST(StaticTorques, AxialForceAtFullExtension) {
  const JointState j{0.0, 0.0, 0, 0};
  const Vec2 tau = static_torques(j, geom(), {0.0, 300.0});
  EXPECT_NEAR(tau.x(), 0.0, 1e-12);
  EXPECT_NEAR(tau.y(), 0.0, 1e-12);
}

TEST(StaticTorques, ZeroForce) {
  const Vec2 tau = static_torques(JointState{0.3, 1.1, 0, 0}, geom(), Vec2::Zero());
  EXPECT_EQ(tau, Vec2::Zero());
}

TEST(StaticTorques, VirtualWorkAndLinearity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> q(-2.5, 2.5);
  std::uniform_real_distribution<double> f(-400.0, 400.0);
  for (int i = 0; i < 50; ++i) {
    const JointState j{q(rng), q(rng), 0, 0};
    const Vec2 force{f(rng), f(rng)};
    const Vec2 qd{q(rng), q(rng)};
    const Vec2 tau = static_torques(j, geom(), force);
    const Vec2 foot_vel = fd_jacobian(j, geom()) * qd;
    EXPECT_NEAR(tau.dot(qd), -force.dot(foot_vel), 1e-6 * (1.0 + force.norm()));
    EXPECT_NEAR(tau.dot(qd), -force.dot(jacobian(j, geom()) * qd), 1e-10 * (1.0 + force.norm()));
    const Vec2 force2{f(rng), f(rng)};
    const Vec2 sum = static_torques(j, geom(), force + 2.0 * force2);
    EXPECT_LT((sum - tau - 2.0 * static_torques(j, geom(), force2)).norm(), 1e-10);
  }
}

TEST(JointVelocities, ZeroFootVelocity) {
  const Vec2 qd = joint_velocities(JointState{0.2, 1.0, 0, 0}, geom(), Vec2::Zero());
  EXPECT_EQ(qd, Vec2::Zero());
}

TEST(JointVelocities, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> q(0.3, 2.5);
  std::uniform_real_distribution<double> v(-20.0, 20.0);
  for (int i = 0; i < 20; ++i) {
    const JointState j{q(rng) - 1.0, q(rng), 0, 0};
    const Vec2 known{v(rng), v(rng)};
    const Vec2 got = joint_velocities(j, geom(), jacobian(j, geom()) * known);
    EXPECT_LT((got - known).norm(), 1e-10);
  }
}

TEST(JointVelocities, SingularWhenExtended) {
  EXPECT_THROW(joint_velocities(JointState{}, geom(), {0.1, 0.0}), SingularConfiguration);
  EXPECT_FALSE(try_joint_velocities(JointState{}, geom(), {0.1, 0.0}).has_value());
}

TEST(RobotGeometry, ContactBelowHipAndWheelAboveContact) {
  const RobotParams p;
  const PlanarState s{0.5, 0.3, 0.2, 0, 0, 0};
  for (LegSide side : kLegSides) {
    const Vec2 hip = hip_position(s, side, p);
    const Vec2 c = contact_point(s, side, p);
    EXPECT_DOUBLE_EQ(c.x(), hip.x());
    EXPECT_DOUBLE_EQ(c.y(), 0.0);
    EXPECT_NEAR((wheel_center(s, side, p) - c - Vec2{0.0, p.wheel_radius}).norm(), 0.0, 1e-15);
  }
  EXPECT_NEAR(hip_position(s, LegSide::Front, p).x(), 0.5 + p.body_half_length * std::cos(0.2), 1e-15);
  EXPECT_NEAR(hip_position(s, LegSide::Hind, p).y(), 0.3 - p.body_half_length * std::sin(0.2), 1e-15);
}

TEST(EvaluateLeg, StanceIsReachableWithFiniteTorque) {
  const RobotParams p;
  const PlanarState s{0.0, p.hip_height_nominal, 0.0, 0, 0, 0};
  const LegSample leg = evaluate_leg(s, LegSide::Hind, {0.0, p.mass * p.gravity / 2.0}, p);
  EXPECT_TRUE(leg.reachable);
  EXPECT_TRUE(leg.nonsingular);
  EXPECT_TRUE(std::isfinite(leg.torque.x()));
  EXPECT_GT(std::abs(leg.torque.y()), 0.0);
}

TEST(EvaluateLeg, TooHighIsUnreachable) {
  const RobotParams p;
  const PlanarState s{0.0, 0.8, 0.0, 0, 0, 0};
  const LegSample leg = evaluate_leg(s, LegSide::Front, Vec2::Zero(), p);
  EXPECT_FALSE(leg.reachable);
  // Wheel center is wheel_radius above ground: hip-to-wheel distance 0.8 - 0.085.
  EXPECT_NEAR(leg.reach_excess, 0.8 - p.wheel_radius - 0.4, 1e-12);
}

}  // namespace
}  // namespace wljump
