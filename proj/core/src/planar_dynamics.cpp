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

#include "wljump/planar_dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wljump {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(field) + ": must be a finite value > 0");
  }
}

}  // namespace

void RobotParams::validate() const {
  require_positive(mass, "mass");
  require_positive(pitch_inertia, "pitch_inertia");
  require_positive(wheel_radius, "wheel_radius");
  require_positive(link_length_upper, "link_length_upper");
  require_positive(link_length_lower, "link_length_lower");
  require_positive(gravity, "gravity");
  require_positive(body_half_length, "body_half_length");
  require_positive(hip_height_nominal, "hip_height_nominal");
}

bool PlanarState::finite() const {
  return std::isfinite(x) && std::isfinite(z) && std::isfinite(theta) && std::isfinite(vx) &&
         std::isfinite(vz) && std::isfinite(omega);
}

PlanarState advance(const PlanarState& s, const PlanarStateRate& r, double h) {
  return {s.x + h * r.x_dot,   s.z + h * r.z_dot,   s.theta + h * r.theta_dot,
          s.vx + h * r.vx_dot, s.vz + h * r.vz_dot, s.omega + h * r.omega_dot};
}

void PhaseSchedule::validate() const {
  if (!(t1 > 0.0)) throw std::invalid_argument("t1: must be > 0");
  if (!(t1 <= t2)) throw std::invalid_argument("t2: must satisfy t1 <= t2");
  if (!(t2 < t3)) throw std::invalid_argument("t3: must satisfy t2 < t3");
  if (!gamma && t1 != t2) throw std::invalid_argument("t2: gamma = 0 requires t1 == t2");
}

PlanarStateRate srbd_derivative(const PlanarState& state, const PlanarWrenchInput& input,
                                const RobotParams& params) {
  const Vec2 p_com(state.x, state.z);
  const Vec2 force = input.f_hind + input.f_front;
  const double torque =
      cross2(input.p_hind - p_com, input.f_hind) + cross2(input.p_front - p_com, input.f_front);

  PlanarStateRate rate;
  rate.x_dot = state.vx;
  rate.z_dot = state.vz;
  rate.theta_dot = state.omega;
  rate.vx_dot = force.x() / params.mass;
  rate.vz_dot = force.y() / params.mass - params.gravity;
  rate.omega_dot = torque / params.pitch_inertia;
  return rate;
}

PlanarState step_euler(const PlanarState& state, const PlanarWrenchInput& input,
                       const RobotParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_euler: dt must be > 0");
  return advance(state, srbd_derivative(state, input, params), dt);
}

PlanarState step_rk4(const PlanarState& state, const WrenchInputFn& input, const RobotParams& params,
                     double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be > 0");
  const double half = 0.5 * dt;
  const PlanarStateRate k1 = srbd_derivative(state, input(t, state), params);
  const PlanarState s2 = advance(state, k1, half);
  const PlanarStateRate k2 = srbd_derivative(s2, input(t + half, s2), params);
  const PlanarState s3 = advance(state, k2, half);
  const PlanarStateRate k3 = srbd_derivative(s3, input(t + half, s3), params);
  const PlanarState s4 = advance(state, k3, dt);
  const PlanarStateRate k4 = srbd_derivative(s4, input(t + dt, s4), params);

  PlanarStateRate mean;
  mean.x_dot = (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot) / 6.0;
  mean.z_dot = (k1.z_dot + 2.0 * k2.z_dot + 2.0 * k3.z_dot + k4.z_dot) / 6.0;
  mean.theta_dot = (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot) / 6.0;
  mean.vx_dot = (k1.vx_dot + 2.0 * k2.vx_dot + 2.0 * k3.vx_dot + k4.vx_dot) / 6.0;
  mean.vz_dot = (k1.vz_dot + 2.0 * k2.vz_dot + 2.0 * k3.vz_dot + k4.vz_dot) / 6.0;
  mean.omega_dot = (k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot + k4.omega_dot) / 6.0;
  return advance(state, mean, dt);
}

PlanarState ballistic_propagate(const PlanarState& state, double duration, const RobotParams& params) {
  if (!(duration >= 0.0)) throw std::invalid_argument("ballistic_propagate: duration must be >= 0");
  const double g = params.gravity;
  PlanarState out = state;
  out.x = state.x + state.vx * duration;
  out.z = state.z + state.vz * duration - 0.5 * g * duration * duration;
  out.vz = state.vz - g * duration;
  out.theta = state.theta + state.omega * duration;
  return out;
}

double mechanical_energy(const Eigen::MatrixXd& joint_torque, const Eigen::MatrixXd& joint_velocity,
                         double dt) {
  if (joint_torque.rows() != joint_velocity.rows() || joint_torque.cols() != joint_velocity.cols()) {
    throw std::invalid_argument("mechanical_energy: torque and velocity trajectories differ in shape");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("mechanical_energy: dt must be > 0");
  const Eigen::Index n = joint_torque.rows();
  if (n < 2) return 0.0;

  const Eigen::VectorXd power = joint_torque.cwiseProduct(joint_velocity).cwiseAbs().rowwise().sum();
  return dt * (power.sum() - 0.5 * (power(0) + power(n - 1)));
}

}  // namespace wljump
