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

#include "wljump/robot_geometry.hpp"

#include <cmath>

namespace wljump {

double hip_offset_x(LegSide side, const RobotParams& params) {
  return side == LegSide::Hind ? -params.body_half_length : params.body_half_length;
}

Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Vec2 hip_position(const PlanarState& state, LegSide side, const RobotParams& params) {
  const double d = hip_offset_x(side, params);
  return {state.x + d * std::cos(state.theta), state.z + d * std::sin(state.theta)};
}

Vec2 contact_point(const PlanarState& state, LegSide side, const RobotParams& params) {
  return {hip_position(state, side, params).x(), 0.0};
}

Vec2 wheel_center(const PlanarState& state, LegSide side, const RobotParams& params) {
  return {hip_position(state, side, params).x(), params.wheel_radius};
}

Vec2 foot_in_body(const PlanarState& state, LegSide side, const RobotParams& params) {
  const Vec2 hip = hip_position(state, side, params);
  const Vec2 rel(0.0, params.wheel_radius - hip.y());
  return rotation(state.theta).transpose() * rel;
}

Vec2 foot_velocity_in_body(const PlanarState& state, LegSide side, const RobotParams& params) {
  const double d = hip_offset_x(side, params);
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  const double hip_z = state.z + d * s;
  const double hip_z_dot = state.vz + d * c * state.omega;

  // rel = (0, r - hip_z) in world; d/dt(R^T rel) = R^T rel_dot - omega * S * R^T rel.
  const Mat2 rt = rotation(state.theta).transpose();
  const Vec2 rel(0.0, params.wheel_radius - hip_z);
  const Vec2 rel_dot(0.0, -hip_z_dot);
  Mat2 skew;
  skew << 0.0, -1.0, 1.0, 0.0;
  return rt * rel_dot - state.omega * (skew * (rt * rel));
}

PlanarWrenchInput stance_input(const PlanarState& state, const Vec2& f_hind, const Vec2& f_front,
                               const RobotParams& params) {
  PlanarWrenchInput in;
  in.f_hind = f_hind;
  in.f_front = f_front;
  in.p_hind = contact_point(state, LegSide::Hind, params);
  in.p_front = contact_point(state, LegSide::Front, params);
  return in;
}

}  // namespace wljump
