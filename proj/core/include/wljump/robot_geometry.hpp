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

// Where the hips, wheels and contact points are for a given body pose.
//
// The wheels roll during take-off, so each contact point stays directly below
// its hip: p_contact = (hip.x, 0) and the wheel center is wheel_radius above it.
#pragma once

#include <array>
#include <string_view>

#include "wljump/types.hpp"

namespace wljump {

enum class LegSide { Hind = 0, Front = 1 };

inline constexpr std::array<LegSide, 2> kLegSides = {LegSide::Hind, LegSide::Front};

inline constexpr std::string_view to_string(LegSide side) {
  return side == LegSide::Hind ? "hind" : "front";
}

/// Signed hip offset along the body x axis (-d for hind, +d for front).
double hip_offset_x(LegSide side, const RobotParams& params);

/// Planar rotation by theta.
Mat2 rotation(double theta);

Vec2 hip_position(const PlanarState& state, LegSide side, const RobotParams& params);
Vec2 contact_point(const PlanarState& state, LegSide side, const RobotParams& params);
Vec2 wheel_center(const PlanarState& state, LegSide side, const RobotParams& params);

/// Wheel center relative to the hip, expressed in the body frame.
Vec2 foot_in_body(const PlanarState& state, LegSide side, const RobotParams& params);

/// Time derivative of foot_in_body, using the pose rates carried by state.
Vec2 foot_velocity_in_body(const PlanarState& state, LegSide side, const RobotParams& params);

/// Wrench input with both contacts below their hips.
PlanarWrenchInput stance_input(const PlanarState& state, const Vec2& f_hind, const Vec2& f_front,
                               const RobotParams& params);

}  // namespace wljump
