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

#include "wljump/locomotion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wljump {

namespace {

constexpr int kWheels = 4;

double traction_bound(const MPCConfig& config, const RobotParams& params) {
  // mu * (m g / 2) per axle, two axles.
  return config.mu * params.mass * params.gravity;
}

std::vector<double> expand_blocks(const Eigen::VectorXd& blocks, int steps) {
  const int b = static_cast<int>(blocks.size());
  std::vector<double> forces(steps);
  for (int k = 0; k < steps; ++k) forces[k] = blocks[std::min(b - 1, k * b / steps)];
  return forces;
}

Eigen::VectorXd block_average(const std::vector<double>& forces, int blocks) {
  const int steps = static_cast<int>(forces.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(blocks);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(blocks);
  for (int k = 0; k < steps; ++k) {
    const int j = std::min(blocks - 1, k * blocks / steps);
    out[j] += forces[k];
    count[j] += 1.0;
  }
  for (int j = 0; j < blocks; ++j) {
    if (count[j] > 0.0) out[j] /= count[j];
  }
  return out;
}

}  // namespace

void RollingState::validate() const {
  if (!(normal_loads.x() >= 0.0 && normal_loads.y() >= 0.0)) {
    throw std::invalid_argument("rolling state: normal loads must be >= 0");
  }
}

void MPCConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("locomotion.horizon: must be > 0");
  if (!(dt > 0.0) || dt > horizon) throw std::invalid_argument("locomotion.dt: must lie in (0, horizon]");
  if (!(control_rate > 0.0)) throw std::invalid_argument("locomotion.control_rate: must be > 0");
  if (!(velocity_weight > 0.0)) throw std::invalid_argument("locomotion.velocity_weight: must be > 0");
  if (!(force_weight >= 0.0)) throw std::invalid_argument("locomotion.force_weight: must be >= 0");
  if (!(wheel_gain >= 0.0)) throw std::invalid_argument("locomotion.wheel_gain: must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("locomotion.mu: must be > 0");
  if (blocks < 1) throw std::invalid_argument("locomotion.blocks: must be >= 1");
  if (!(sim_dt > 0.0)) throw std::invalid_argument("locomotion.sim_dt: must be > 0");
  solver.validate();
}

int MPCConfig::steps() const { return std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-9))); }

double wheel_torque(double v_desired, double v_current, double f_tangential, double wheel_gain,
                    const RobotParams& params, const WheelLimits& limits) {
  const double tau = wheel_gain * (v_desired - v_current) + f_tangential * params.wheel_radius;
  return std::clamp(tau, -limits.tau_max, limits.tau_max);
}

double velocity_tracking_cost(const std::vector<double>& forces, double vx0, double v_desired,
                              const MPCConfig& config, const RobotParams& params,
                              const WheelLimits& limits, std::vector<double>* predicted) {
  const double cap = limits.speed_cap(params.wheel_radius);
  double vx = vx0;
  double cost = 0.0;
  if (predicted) {
    predicted->clear();
    predicted->push_back(vx);
  }
  for (double f : forces) {
    vx = std::clamp(vx + config.dt * f / params.mass, -cap, cap);
    const double e = vx - v_desired;
    cost += config.velocity_weight * e * e + config.force_weight * f * f;
    if (predicted) predicted->push_back(vx);
  }
  return cost;
}

VelocityPlan plan_velocity_mpc(const RollingState& state, double v_desired, const MPCConfig& config,
                               const RobotParams& params, const WheelLimits& limits,
                               const std::vector<double>& warm_start) {
  config.validate();
  const int steps = config.steps();
  const double bound = traction_bound(config, params);

  de::SearchSpace space;
  space.lower = Eigen::VectorXd::Constant(config.blocks, -bound);
  space.upper = Eigen::VectorXd::Constant(config.blocks, bound);

  const de::Objective objective = [&](const Eigen::VectorXd& blocks) {
    return velocity_tracking_cost(expand_blocks(blocks, steps), state.vx, v_desired, config, params, limits);
  };

  std::vector<Eigen::VectorXd> seeds;
  seeds.push_back(Eigen::VectorXd::Zero(config.blocks));
  const double push = v_desired > state.vx ? bound : -bound;
  seeds.push_back(Eigen::VectorXd::Constant(config.blocks, push));
  if (static_cast<int>(warm_start.size()) == steps) {
    // Shift by one control period.
    const int shift = std::max(1, static_cast<int>(std::lround(1.0 / (config.control_rate * config.dt))));
    std::vector<double> shifted(steps, warm_start.back());
    for (int k = 0; k + shift < steps; ++k) shifted[k] = warm_start[k + shift];
    seeds.push_back(block_average(shifted, config.blocks));
  }

  const de::DEResult res = de::optimize(objective, space, config.solver, seeds);

  VelocityPlan plan;
  plan.forces = expand_blocks(res.best_vector, steps);
  for (double& f : plan.forces) f = std::clamp(f, -bound, bound);
  plan.cost = velocity_tracking_cost(plan.forces, state.vx, v_desired, config, params, limits,
                                     &plan.predicted_vx);
  return plan;
}

double RollingTrajectory::max_vx() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::max(m, s.vx);
  return m;
}

namespace {

// Fixed-step plant with a receding-horizon planner in the loop.
class RollingSimulator {
 public:
  RollingSimulator(double v_desired, const RobotParams& params, const MPCConfig& config,
                   const WheelLimits& limits, const RollingState& start)
      : v_desired_(v_desired), params_(params), config_(config), limits_(limits),
        x_(start.x), vx_(start.vx) {
    control_period_ = 1.0 / config.control_rate;
    replan_every_ = std::max(1L, std::lround(control_period_ / config.sim_dt));
    record();
  }

  void step() {
    if (tick_ % replan_every_ == 0) {
      RollingState s;
      s.x = x_;
      s.vx = vx_;
      s.wheel_omega = vx_ / params_.wheel_radius;
      s.normal_loads = Vec2::Constant(0.5 * params_.mass * params_.gravity);
      plan_ = plan_velocity_mpc(s, v_desired_, config_, params_, limits_, plan_.forces);
      plan_time_ = t_;
    }

    const double since = t_ - plan_time_;
    const int k = std::clamp(static_cast<int>(since / config_.dt), 0, static_cast<int>(plan_.forces.size()) - 1);
    const double frac = std::clamp(since / config_.dt - k, 0.0, 1.0);
    const double v_ref = plan_.predicted_vx[k] + frac * (plan_.predicted_vx[k + 1] - plan_.predicted_vx[k]);
    const double f_wheel = plan_.forces[k] / kWheels;

    torque_ = wheel_torque(v_ref, vx_, f_wheel, config_.wheel_gain, params_, limits_);
    double traction = torque_ / params_.wheel_radius;
    const double grip = config_.mu * params_.mass * params_.gravity / kWheels;
    traction = std::clamp(traction, -grip, grip);

    // A motor at its speed limit cannot push further in that direction.
    const double cap = limits_.speed_cap(params_.wheel_radius);
    if ((vx_ >= cap && traction > 0.0) || (vx_ <= -cap && traction < 0.0)) traction = 0.0;

    force_ = kWheels * traction;
    vx_ = std::clamp(vx_ + config_.sim_dt * force_ / params_.mass, -cap, cap);
    x_ += config_.sim_dt * vx_;
    t_ += config_.sim_dt;
    ++tick_;
    record();
  }

  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] double vx() const { return vx_; }
  [[nodiscard]] double x() const { return x_; }
  RollingTrajectory& trajectory() { return traj_; }

 private:
  void record() {
    traj_.samples.push_back({t_, x_, vx_, vx_ / params_.wheel_radius, force_, torque_});
  }

  double v_desired_;
  const RobotParams& params_;
  const MPCConfig& config_;
  const WheelLimits& limits_;
  double x_;
  double vx_;
  double t_ = 0.0;
  long tick_ = 0;
  long replan_every_ = 1;
  double control_period_ = 0.02;
  double plan_time_ = 0.0;
  double force_ = 0.0;
  double torque_ = 0.0;
  VelocityPlan plan_;
  RollingTrajectory traj_;
};

}  // namespace

RollingTrajectory simulate_rolling(double v_desired, double duration, const RobotParams& params,
                                   const MPCConfig& config, const WheelLimits& limits,
                                   const RollingState& start) {
  config.validate();
  params.validate();
  RollingSimulator sim(v_desired, params, config, limits, start);
  const long steps = std::lround(duration / config.sim_dt);
  for (long i = 0; i < steps; ++i) sim.step();
  return std::move(sim.trajectory());
}

SpeedSaturation::SpeedSaturation(double requested, double cap)
    : std::runtime_error("requested speed " + std::to_string(requested) +
                         " m/s exceeds the wheel speed cap " + std::to_string(cap) + " m/s"),
      requested_(requested), cap_(cap) {}

RollingHandoff simulate_rolling_to_speed(double v_target, const RobotParams& params,
                                         const MPCConfig& config, const WheelLimits& limits,
                                         double max_time) {
  config.validate();
  params.validate();
  const double cap = limits.speed_cap(params.wheel_radius);
  if (std::abs(v_target) > cap + 1e-12) throw SpeedSaturation(v_target, cap);

  RollingSimulator sim(v_target, params, config, limits, RollingState{});
  RollingHandoff out;
  double held = 0.0;
  if (std::abs(sim.vx() - v_target) >= kHandoffBand) {
    while (sim.t() < max_time) {
      sim.step();
      held = std::abs(sim.vx() - v_target) < kHandoffBand ? held + config.sim_dt : 0.0;
      if (held >= kHandoffHold - 1e-12) break;
    }
  }
  out.converged = std::abs(sim.vx() - v_target) < kHandoffBand;
  out.handoff_time = sim.t();
  out.wheel_omega = sim.vx() / params.wheel_radius;
  out.handoff = {sim.x(), params.hip_height_nominal, 0.0, sim.vx(), 0.0, 0.0};
  out.trajectory = std::move(sim.trajectory());
  return out;
}

ContactCheck contact_constraint_check(const Vec3& foot_velocity, const Vec3& force, double mu,
                                      double velocity_tolerance) {
  ContactCheck c;
  c.normal_velocity_ok = std::abs(foot_velocity.y()) < velocity_tolerance;
  c.lateral_velocity_ok = std::abs(foot_velocity.z()) < velocity_tolerance;
  c.unilateral_ok = force.y() > 0.0;
  c.friction_ok = c.unilateral_ok && std::hypot(force.x(), force.z()) / force.y() < mu;
  return c;
}

SwingCheck swing_constraint_check(double foot_velocity_normal, double desired, const Vec3& force,
                                  double velocity_tolerance) {
  SwingCheck c;
  c.force_free = force.norm() < 1e-6;
  c.velocity_ok = std::abs(foot_velocity_normal - desired) < velocity_tolerance;
  return c;
}

}  // namespace wljump
