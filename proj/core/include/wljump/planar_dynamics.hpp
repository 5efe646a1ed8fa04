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

// Single-rigid-body planar dynamics, integrators and energy bookkeeping.
#pragma once

#include <functional>

#include <Eigen/Core>

#include "wljump/types.hpp"

namespace wljump {

/// Scalar planar cross product a.x * b.y - a.y * b.x (the y-moment of b
/// applied at lever arm a, using the x-z plane with theta counter-clockwise).
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/**
 * @brief SRBD derivative in the plane.
 *
 * m * dv/dt = f_hind + f_front + m * g_vec,
 * I * domega/dt = sum_i cross2(p_i - p_com, f_i).
 */
PlanarStateRate srbd_derivative(const PlanarState& state, const PlanarWrenchInput& input,
                                const RobotParams& params);

/// Explicit Euler: x_{k+1} = x_k + dt * f(x_k, u_k). Requires dt > 0.
PlanarState step_euler(const PlanarState& state, const PlanarWrenchInput& input,
                       const RobotParams& params, double dt);

/// Input as a function of time and the current state. Contact points
/// usually depend on the body pose, hence the state argument.
using WrenchInputFn = std::function<PlanarWrenchInput(double t, const PlanarState& state)>;

/// Classical fourth-order Runge-Kutta step over [t, t + dt]. Requires dt > 0.
PlanarState step_rk4(const PlanarState& state, const WrenchInputFn& input, const RobotParams& params,
                     double t, double dt);

/// Closed-form projectile motion with zero contact force. Requires duration >= 0.
PlanarState ballistic_propagate(const PlanarState& state, double duration, const RobotParams& params);

/**
 * Trapezoidal quadrature of sum_j |tau_j(t) * qd_j(t)| for uniformly sampled
 * trajectories (rows = samples, cols = joints). Throws std::invalid_argument
 * on a shape mismatch or dt <= 0.
 */
double mechanical_energy(const Eigen::MatrixXd& joint_torque, const Eigen::MatrixXd& joint_velocity,
                         double dt);

}  // namespace wljump
