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

#include "wljump/jump_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "wljump/planar_dynamics.hpp"

namespace wljump {

namespace {

constexpr double kInvalidCost = 1e30;

bool finite3(const Vec3& v) { return v.allFinite(); }

double poly_value(const std::array<double, 5>& c, double tau) {
  return c[0] + tau * (c[1] + tau * (c[2] + tau * (c[3] + tau * c[4])));
}
double poly_d1(const std::array<double, 5>& c, double tau) {
  return c[1] + tau * (2.0 * c[2] + tau * (3.0 * c[3] + tau * 4.0 * c[4]));
}
double poly_d2(const std::array<double, 5>& c, double tau) {
  return 2.0 * c[2] + tau * (6.0 * c[3] + tau * 12.0 * c[4]);
}

// Cubic with zero initial acceleration through p(h) = p_mid.
std::array<double, 5> cubic_static_start(double p0, double v0, double h, double p_mid) {
  return {p0, v0, 0.0, (p_mid - p0 - v0 * h) / (h * h * h), 0.0};
}

// Cubic matching (p0, v0) at tau = 0 and (p1, v1) at tau = T.
std::array<double, 5> cubic_hermite(double p0, double v0, double T, double p1, double v1) {
  const double e1 = p1 - p0 - v0 * T;
  const double e2 = v1 - v0;
  return {p0, v0, (3.0 * e1 - T * e2) / (T * T), (T * e2 - 2.0 * e1) / (T * T * T), 0.0};
}

// Quartic continuing (p0, v0, a0) and reaching (p1, v1) at tau = T.
std::array<double, 5> quartic_continuation(double p0, double v0, double a0, double T, double p1,
                                           double v1) {
  const double e1 = p1 - (p0 + v0 * T + 0.5 * a0 * T * T);
  const double e2 = v1 - (v0 + a0 * T);
  return {p0, v0, 0.5 * a0, (4.0 * e1 - T * e2) / (T * T * T), (T * e2 - 3.0 * e1) / (T * T * T * T)};
}

// Pitch dynamics along a fixed CoM path. Step 1 has the affine vertical force
// split (front minus hind) split(t) = offset + rate * t; step 2 has the hind
// pair carrying the whole net force.
struct PitchProblem {
  const RobotParams* params = nullptr;
  const ComSegment* step1 = nullptr;
  const ComSegment* step2 = nullptr;
  bool has_step2 = false;
  int steps1 = 0;
  int steps2 = 0;
  double theta0 = 0.0;
  double omega0 = 0.0;
  double theta_mid = 0.0;     // keyframe at t1/2
  double theta_final = 0.0;   // keyframe at t3
  double flight = 0.0;        // t3 - t2
};

struct PitchPoint {
  double theta;
  double omega;
};

struct PitchRollout {
  Vec2 residual = Vec2::Zero();
  Mat2 jacobian = Mat2::Zero();
  std::vector<PitchPoint> grid1;  // steps1 + 1 points
  std::vector<PitchPoint> grid2;  // steps2 + 1 points
};

// Net CoM force at time t on a segment.
Vec2 net_force(const ComSegment& seg, double t, const RobotParams& p) {
  const Vec2 a = seg.acceleration(t);
  return {p.mass * a.x(), p.mass * (a.y() + p.gravity)};
}

// Explicit Euler on (theta, omega) with exact discrete sensitivities wrt the
// split coefficients.
PitchRollout rollout_pitch(const PitchProblem& pb, const Vec2& split, bool record) {
  const RobotParams& p = *pb.params;
  const double d = p.body_half_length;
  const double inv_i = 1.0 / p.pitch_inertia;

  double theta = pb.theta0;
  double omega = pb.omega0;
  Vec2 s_theta = Vec2::Zero();
  Vec2 s_omega = Vec2::Zero();

  PitchRollout out;
  if (record) {
    out.grid1.reserve(pb.steps1 + 1);
    out.grid1.push_back({theta, omega});
  }

  const double h1 = pb.step1->t_end / pb.steps1;
  const int mid = pb.steps1 / 2;
  for (int k = 0; k < pb.steps1; ++k) {
    const double t = k * h1;
    const double z = pb.step1->position(t).y();
    const double fx = p.mass * pb.step1->acceleration(t).x();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double diff = split.x() + split.y() * t;
    const double alpha = (d * c * diff + z * fx) * inv_i;
    const double dalpha_dtheta = -d * s * diff * inv_i;
    const Vec2 dalpha_dsplit(d * c * inv_i, d * c * t * inv_i);

    const Vec2 s_theta_next = s_theta + h1 * s_omega;
    s_omega += h1 * (dalpha_dtheta * s_theta + dalpha_dsplit);
    s_theta = s_theta_next;
    theta += h1 * omega;
    omega += h1 * alpha;

    if (k + 1 == mid) {
      out.residual.x() = theta - pb.theta_mid;
      out.jacobian.row(0) = s_theta.transpose();
    }
    if (record) out.grid1.push_back({theta, omega});
  }

  if (pb.has_step2) {
    if (record) {
      out.grid2.reserve(pb.steps2 + 1);
      out.grid2.push_back({theta, omega});
    }
    const double t_start = pb.step2->t_start;
    const double h2 = (pb.step2->t_end - t_start) / pb.steps2;
    for (int k = 0; k < pb.steps2; ++k) {
      const double t = t_start + k * h2;
      const double z = pb.step2->position(t).y();
      const Vec2 f = net_force(*pb.step2, t, p);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double alpha = (-d * c * f.y() + z * f.x()) * inv_i;
      const double dalpha_dtheta = d * s * f.y() * inv_i;

      const Vec2 s_theta_next = s_theta + h2 * s_omega;
      s_omega += h2 * (dalpha_dtheta * s_theta);
      s_theta = s_theta_next;
      theta += h2 * omega;
      omega += h2 * alpha;
      if (record) out.grid2.push_back({theta, omega});
    }
  }

  out.residual.y() = theta + omega * pb.flight - pb.theta_final;
  out.jacobian.row(1) = (s_theta + pb.flight * s_omega).transpose();
  return out;
}

struct PitchSolution {
  Vec2 split = Vec2::Zero();
  double residual = 0.0;
  int iterations = 0;
};

PitchSolution solve_pitch(const PitchProblem& pb) {
  constexpr int kMaxIterations = 20;
  constexpr double kTolerance = 1e-12;

  PitchSolution sol;
  PitchRollout r = rollout_pitch(pb, sol.split, false);
  double norm = r.residual.norm();
  for (int it = 0; it < kMaxIterations && norm > kTolerance && std::isfinite(norm); ++it) {
    sol.iterations = it + 1;
    const double det = r.jacobian.determinant();
    if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) break;
    const Vec2 step = r.jacobian.inverse() * r.residual;
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 8; ++ls, lambda *= 0.5) {
      const Vec2 candidate = sol.split - lambda * step;
      PitchRollout rc = rollout_pitch(pb, candidate, false);
      const double n = rc.residual.norm();
      if (std::isfinite(n) && n < norm) {
        sol.split = candidate;
        r = std::move(rc);
        norm = n;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  sol.residual = norm;
  return sol;
}

int even_steps(int sample_count, int substeps) {
  int n = (sample_count - 1) * substeps;
  if (n % 2 != 0) n *= 2;
  return n;
}

}  // namespace

std::string_view to_string(PenaltyClass c) {
  switch (c) {
    case PenaltyClass::Terminal: return "terminal";
    case PenaltyClass::ContactForce: return "contact_force";
    case PenaltyClass::Friction: return "friction";
    case PenaltyClass::JointAngle: return "joint_angle";
    case PenaltyClass::JointVelocity: return "joint_velocity";
    case PenaltyClass::JointTorque: return "joint_torque";
    case PenaltyClass::BodyHeight: return "body_height";
  }
  return "unknown";
}

void JumpTarget::validate() const {
  if (!std::isfinite(x) || !std::isfinite(theta)) throw std::invalid_argument("target: must be finite");
  if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("target.z: must be > 0");
}

void DecisionVector::validate() const {
  if (!finite3(s_half_t1) || !finite3(s_t2) || !finite3(s_t3)) {
    throw std::invalid_argument("decision: keyframes must be finite");
  }
  if (!(t1 > 0.0)) throw std::invalid_argument("decision.t1: must be > 0");
  if (!(t1 <= t2)) throw std::invalid_argument("decision.t2: must satisfy t1 <= t2");
  if (!(t2 < t3)) throw std::invalid_argument("decision.t3: must satisfy t2 < t3");
}

void JumpSearchBounds::validate() const {
  auto check = [](double lo, double hi, const char* name) {
    if (!(lo < hi)) throw std::invalid_argument(std::string("bounds.") + name + ": lower must be < upper");
  };
  if (!(keyframe_dx > 0.0)) throw std::invalid_argument("bounds.keyframe_dx: must be > 0");
  check(z_lo, z_hi, "z");
  check(theta_lo, theta_hi, "theta");
  check(t1_lo, t1_hi, "t1");
  check(step2_lo, step2_hi, "step2_duration");
  check(flight_lo, flight_hi, "flight_duration");
  if (!(t1_lo > 0.0)) throw std::invalid_argument("bounds.t1: lower bound must be > 0");
  if (!(step2_lo >= 0.0)) throw std::invalid_argument("bounds.step2_duration: lower bound must be >= 0");
  if (!(flight_lo > 0.0)) throw std::invalid_argument("bounds.flight_duration: lower bound must be > 0");
}

void PlannerConfig::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("planner.mu: must be > 0");
  if (!(f_z_min > 0.0)) throw std::invalid_argument("planner.f_z_min: must be > 0");
  if (sample_count < 3) throw std::invalid_argument("planner.sample_count: must be >= 3");
  if (transcription_substeps < 1) {
    throw std::invalid_argument("planner.transcription_substeps: must be >= 1");
  }
  if (restarts < 1) throw std::invalid_argument("planner.restarts: must be >= 1");
  if (!(limit_margin >= 0.0 && limit_margin < 0.5)) {
    throw std::invalid_argument("planner.limit_margin: must lie in [0, 0.5)");
  }
  if (!(violation_tolerance >= 0.0)) {
    throw std::invalid_argument("planner.violation_tolerance: must be >= 0");
  }
  limits.validate();
  de.validate();
  bounds.validate();
  if (initial_guess) initial_guess->validate();
  if (gamma && !(bounds.step2_hi > kMinStep2Duration)) {
    throw std::invalid_argument("bounds.step2_duration: upper bound must exceed the minimum step-2 duration");
  }
}

PlanConstraints PlannerConfig::constraints(const RobotParams& params) const {
  PlanConstraints c;
  c.mu = mu;
  c.f_z_min = f_z_min;
  c.z_min = z_min.value_or(params.wheel_radius + 0.03);
  c.limits = limits;
  c.tolerance = violation_tolerance;
  c.knee_branch = knee_branch;
  return c;
}

PlanConstraints PlanConstraints::tightened(double margin) const {
  PlanConstraints c = *this;
  c.z_min *= 1.0 + margin;
  const double shrink = 0.5 * margin * (c.limits.q_max - c.limits.q_min);
  c.limits.q_min += shrink;
  c.limits.q_max -= shrink;
  c.limits.qd_max *= 1.0 - margin;
  c.limits.tau_max *= 1.0 - margin;
  return c;
}

Vec2 ComSegment::position(double t) const {
  const double tau = t - t_start;
  return {poly_value(x, tau), poly_value(z, tau)};
}
Vec2 ComSegment::velocity(double t) const {
  const double tau = t - t_start;
  return {poly_d1(x, tau), poly_d1(z, tau)};
}
Vec2 ComSegment::acceleration(double t) const {
  const double tau = t - t_start;
  return {poly_d2(x, tau), poly_d2(z, tau)};
}

ForceDistribution distribute_forces(const Vec2& net_force, double net_torque,
                                    std::span<const ContactPoint> contacts, const Vec2& p_com) {
  ForceDistribution out;
  if (contacts.empty()) {
    out.infeasible = net_force.norm() > 0.0 || net_torque != 0.0;
    out.torque_residual = net_torque;
    return out;
  }
  auto slot = [&](LegSide side) -> Vec2& { return side == LegSide::Hind ? out.f_hind : out.f_front; };

  if (contacts.size() == 1) {
    const Vec2 r = contacts[0].position - p_com;
    slot(contacts[0].side) = net_force;
    out.torque_residual = net_torque - cross2(r, net_force);
    return out;
  }
  if (contacts.size() != 2 || contacts[0].side == contacts[1].side) {
    throw std::invalid_argument("distribute_forces: expected one hind and/or one front contact");
  }

  // Unknowns (f0x, f0z, f1x, f1z); rows: sum fx, sum fz, sum cross2(r_i, f_i).
  const Vec2 r0 = contacts[0].position - p_com;
  const Vec2 r1 = contacts[1].position - p_com;
  Eigen::Matrix<double, 3, 4> a;
  a << 1.0, 0.0, 1.0, 0.0,
       0.0, 1.0, 0.0, 1.0,
       -r0.y(), r0.x(), -r1.y(), r1.x();
  const Eigen::Vector3d w(net_force.x(), net_force.y(), net_torque);

  const Eigen::Matrix3d gram = a * a.transpose();
  Eigen::Vector4d f;
  if (std::abs(gram.determinant()) > 1e-12) {
    f = a.transpose() * gram.inverse() * w;
  } else {
    f = a.completeOrthogonalDecomposition().solve(w);
  }
  slot(contacts[0].side) = f.head<2>();
  slot(contacts[1].side) = f.tail<2>();
  out.torque_residual = net_torque - (cross2(r0, f.head<2>()) + cross2(r1, f.tail<2>()));
  return out;
}

TakeoffPlan decode(const DecisionVector& decision, const PlanarState& initial, bool gamma,
                   const RobotParams& params, const DecodeOptions& options) {
  decision.validate();
  if (options.sample_count < 3) throw std::invalid_argument("decode: sample_count must be >= 3");
  if (options.transcription_substeps < 1) {
    throw std::invalid_argument("decode: transcription_substeps must be >= 1");
  }

  TakeoffPlan plan;
  plan.decision = decision;
  plan.initial = initial;
  plan.target = {decision.s_t3.x(), decision.s_t3.y(), decision.s_t3.z()};

  const double t1 = decision.t1;
  const bool has_step2 = gamma && decision.t2 > decision.t1;
  const double t2 = has_step2 ? decision.t2 : t1;
  const double flight = decision.t3 - decision.t2;
  const double t3 = t2 + flight;
  plan.phase = {t1, t2, t3, has_step2};

  const double g = params.gravity;
  // Take-off velocity whose ballistic arc links the t2 and t3 keyframes.
  const double vx2 = (decision.s_t3.x() - decision.s_t2.x()) / flight;
  const double vz2 = (decision.s_t3.y() - decision.s_t2.y()) / flight + 0.5 * g * flight;

  plan.step1.t_start = 0.0;
  plan.step1.t_end = t1;
  plan.step2.t_start = t1;
  plan.step2.t_end = t2;
  if (has_step2) {
    const double h = 0.5 * t1;
    plan.step1.x = cubic_static_start(initial.x, initial.vx, h, decision.s_half_t1.x());
    plan.step1.z = cubic_static_start(initial.z, initial.vz, h, decision.s_half_t1.y());
    const Vec2 p1 = plan.step1.position(t1);
    const Vec2 v1 = plan.step1.velocity(t1);
    const Vec2 a1 = plan.step1.acceleration(t1);
    const double dur = t2 - t1;
    plan.step2.x = quartic_continuation(p1.x(), v1.x(), a1.x(), dur, decision.s_t2.x(), vx2);
    plan.step2.z = quartic_continuation(p1.y(), v1.y(), a1.y(), dur, decision.s_t2.y(), vz2);
  } else {
    plan.step1.x = cubic_hermite(initial.x, initial.vx, t1, decision.s_t2.x(), vx2);
    plan.step1.z = cubic_hermite(initial.z, initial.vz, t1, decision.s_t2.y(), vz2);
  }

  PitchProblem pb;
  pb.params = &params;
  pb.step1 = &plan.step1;
  pb.step2 = &plan.step2;
  pb.has_step2 = has_step2;
  pb.steps1 = even_steps(options.sample_count, options.transcription_substeps);
  pb.steps2 = (options.sample_count - 1) * options.transcription_substeps;
  pb.theta0 = initial.theta;
  pb.omega0 = initial.omega;
  pb.theta_mid = decision.s_half_t1.z();
  pb.theta_final = decision.s_t3.z();
  pb.flight = flight;

  const PitchSolution pitch = solve_pitch(pb);
  plan.split_offset = pitch.split.x();
  plan.split_rate = pitch.split.y();
  plan.pitch_residual = pitch.residual;
  plan.pitch_iterations = pitch.iterations;
  const PitchRollout traj = rollout_pitch(pb, pitch.split, true);

  const double d = params.body_half_length;
  const int n = options.sample_count;

  auto fill_sample = [&](TakeoffSample& s, const ComSegment& seg, const PitchPoint& pp, double t, int phase) {
    s.t = t;
    s.phase = phase;
    const Vec2 pos = seg.position(t);
    const Vec2 vel = seg.velocity(t);
    s.state = {pos.x(), pos.y(), pp.theta, vel.x(), vel.y(), pp.omega};
    const Vec2 f = net_force(seg, t, params);
    const double c = std::cos(pp.theta);
    double torque;
    if (phase == 1) {
      torque = d * c * (plan.split_offset + plan.split_rate * t) + pos.y() * f.x();
    } else {
      torque = -d * c * f.y() + pos.y() * f.x();
    }

    std::array<ContactPoint, 2> contacts{
        ContactPoint{LegSide::Hind, contact_point(s.state, LegSide::Hind, params)},
        ContactPoint{LegSide::Front, contact_point(s.state, LegSide::Front, params)}};
    const std::size_t active = phase == 1 ? 2 : 1;
    const ForceDistribution dist =
        distribute_forces(f, torque, std::span<const ContactPoint>(contacts.data(), active), pos);
    s.f_hind = dist.f_hind;
    s.f_front = dist.f_front;
    s.torque_residual = dist.torque_residual;
    s.in_contact = {true, phase == 1};
    s.legs[0] = evaluate_leg(s.state, LegSide::Hind, s.f_hind, params, options.knee_branch);
    if (phase == 1) {
      s.legs[1] = evaluate_leg(s.state, LegSide::Front, s.f_front, params, options.knee_branch);
    }
  };

  const int stride1 = pb.steps1 / (n - 1);
  plan.step1_samples.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = (k == n - 1) ? t1 : t1 * static_cast<double>(k * stride1) / pb.steps1;
    fill_sample(plan.step1_samples[k], plan.step1, traj.grid1[k * stride1], t, 1);
  }
  if (has_step2) {
    const int stride2 = pb.steps2 / (n - 1);
    plan.step2_samples.resize(n);
    for (int k = 0; k < n; ++k) {
      const double t = (k == n - 1) ? t2 : t1 + (t2 - t1) * static_cast<double>(k * stride2) / pb.steps2;
      fill_sample(plan.step2_samples[k], plan.step2, traj.grid2[k * stride2], t, 2);
    }
  }

  plan.takeoff_state = has_step2 ? plan.step2_samples.back().state : plan.step1_samples.back().state;
  plan.terminal_state = ballistic_propagate(plan.takeoff_state, flight, params);
  plan.x_roll = plan.takeoff_state.x - initial.x;

  plan.flight_samples.resize(n);
  for (int k = 0; k < n; ++k) {
    const double tau = flight * static_cast<double>(k) / (n - 1);
    plan.flight_samples[k] = {t2 + tau, ballistic_propagate(plan.takeoff_state, tau, params)};
  }

  // Mechanical energy over the take-off; each virtual leg stands for two real legs.
  auto phase_energy = [&](const std::vector<TakeoffSample>& samples, double duration) {
    if (samples.size() < 2 || !(duration > 0.0)) return 0.0;
    double total = 0.0;
    const double dt = duration / static_cast<double>(samples.size() - 1);
    for (LegSide side : kLegSides) {
      const int li = static_cast<int>(side);
      if (!samples.front().in_contact[li]) continue;
      Eigen::MatrixXd tau(samples.size(), 2);
      Eigen::MatrixXd qd(samples.size(), 2);
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const LegSample& leg = samples[k].legs[li];
        tau.row(k) = leg.torque.transpose();
        qd(k, 0) = leg.joints.qd_hip;
        qd(k, 1) = leg.joints.qd_knee;
      }
      total += 2.0 * mechanical_energy(tau, qd, dt);
    }
    return total;
  };
  plan.energy_zeta = phase_energy(plan.step1_samples, t1) + phase_energy(plan.step2_samples, t2 - t1);
  return plan;
}

PenaltyReport assemble_penalty(const std::array<double, kPenaltyClassCount>& sigma, double zeta,
                               double tolerance, PenaltyWeighting weighting) {
  PenaltyReport report;
  report.sigma = sigma;
  report.zeta = zeta;
  double total = zeta;
  for (int i = 0; i < kPenaltyClassCount; ++i) {
    const int n = i + 1;
    const bool violated = !(sigma[i] <= tolerance);  // NaN counts as violated
    if (violated) report.violated_mask |= 1u << i;
    report.weight[i] = weighting == PenaltyWeighting::Constant ? 1 : (violated ? 1 : 0);
    if (report.weight[i] != 0) {
      total += report.weight[i] * (std::pow(10.0, n + 3) + std::pow(10.0, n) * sigma[i]);
    }
  }
  report.total_cost = total;
  return report;
}

PenaltyReport evaluate_penalties(const TakeoffPlan& plan, const JumpTarget& target,
                                 const PlannerConfig& config, const RobotParams& params) {
  const PlanConstraints c = config.constraints(params).tightened(config.limit_margin);
  std::array<double, kPenaltyClassCount> sigma{};
  auto add = [&](PenaltyClass k, double v) { sigma[static_cast<int>(k)] += v; };

  add(PenaltyClass::Terminal, (plan.terminal_state.pose() - target.pose()).norm());

  auto check_take_off = [&](const std::vector<TakeoffSample>& samples) {
    for (const TakeoffSample& s : samples) {
      add(PenaltyClass::Friction, std::abs(s.torque_residual));
      add(PenaltyClass::BodyHeight, std::max(0.0, c.z_min - s.state.z));
      for (LegSide side : kLegSides) {
        const int li = static_cast<int>(side);
        if (!s.in_contact[li]) continue;
        const Vec2& f = li == 0 ? s.f_hind : s.f_front;
        add(PenaltyClass::ContactForce, std::max(0.0, c.f_z_min - f.y()));
        add(PenaltyClass::Friction, std::max(0.0, std::abs(f.x()) - c.mu * f.y()));

        const LegSample& leg = s.legs[li];
        if (!leg.reachable) {
          add(PenaltyClass::JointAngle, leg.reach_excess);
          continue;
        }
        for (double q : {leg.joints.q_hip, leg.joints.q_knee}) {
          add(PenaltyClass::JointAngle, std::max(0.0, q - c.limits.q_max) + std::max(0.0, c.limits.q_min - q));
        }
        if (leg.nonsingular) {
          for (double qd : {leg.joints.qd_hip, leg.joints.qd_knee}) {
            add(PenaltyClass::JointVelocity, std::max(0.0, std::abs(qd) - c.limits.qd_max));
          }
        } else {
          add(PenaltyClass::JointVelocity, c.limits.qd_max);
        }
        for (double tau : {leg.torque.x(), leg.torque.y()}) {
          add(PenaltyClass::JointTorque, std::max(0.0, std::abs(tau) - c.limits.tau_max));
        }
      }
    }
  };
  check_take_off(plan.step1_samples);
  check_take_off(plan.step2_samples);
  for (const FlightSample& s : plan.flight_samples) {
    add(PenaltyClass::BodyHeight, std::max(0.0, c.z_min - s.state.z));
  }

  return assemble_penalty(sigma, plan.energy_zeta, c.tolerance, config.weighting);
}

de::SearchSpace jump_search_space(const JumpSearchBounds& b, const PlanarState& initial, bool gamma) {
  de::SearchSpace space;
  space.lower.resize(kGenomeSize);
  space.upper.resize(kGenomeSize);
  for (int k = 0; k < 2; ++k) {
    space.lower.segment<3>(3 * k) << initial.x - b.keyframe_dx, b.z_lo, b.theta_lo;
    space.upper.segment<3>(3 * k) << initial.x + b.keyframe_dx, b.z_hi, b.theta_hi;
  }
  space.lower[6] = b.t1_lo;
  space.upper[6] = b.t1_hi;
  space.lower[7] = gamma ? std::max(b.step2_lo, kMinStep2Duration) : b.step2_lo;
  space.upper[7] = b.step2_hi;
  space.lower[8] = b.flight_lo;
  space.upper[8] = b.flight_hi;
  return space;
}

DecisionVector decision_from_genome(const Eigen::VectorXd& genome, const JumpTarget& target, bool gamma) {
  if (genome.size() != kGenomeSize) throw std::invalid_argument("genome: expected 9 entries");
  DecisionVector d;
  d.s_half_t1 = genome.segment<3>(0);
  d.s_t2 = genome.segment<3>(3);
  d.s_t3 = target.pose();
  d.t1 = genome[6];
  d.t2 = d.t1 + (gamma ? genome[7] : 0.0);
  d.t3 = d.t2 + genome[8];
  return d;
}

Eigen::VectorXd genome_from_decision(const DecisionVector& decision) {
  Eigen::VectorXd g(kGenomeSize);
  g.segment<3>(0) = decision.s_half_t1;
  g.segment<3>(3) = decision.s_t2;
  g[6] = decision.t1;
  g[7] = decision.t2 - decision.t1;
  g[8] = decision.t3 - decision.t2;
  return g;
}

TakeoffPlan decode_and_score(const DecisionVector& decision, const PlanarState& initial,
                             const JumpTarget& target, const RobotParams& params,
                             const PlannerConfig& config) {
  DecodeOptions opts{config.sample_count, config.transcription_substeps, config.knee_branch};
  TakeoffPlan plan = decode(decision, initial, config.gamma, params, opts);
  plan.target = target;
  plan.constraints = config.constraints(params);
  plan.penalties = evaluate_penalties(plan, target, config, params);
  return plan;
}

JumpSolution solve(const PlanarState& initial, const JumpTarget& target, const RobotParams& params,
                   const PlannerConfig& config) {
  params.validate();
  config.validate();
  target.validate();
  if (!initial.finite()) throw std::invalid_argument("initial state: must be finite");

  const de::SearchSpace space = jump_search_space(config.bounds, initial, config.gamma);
  const de::Objective objective = [&](const Eigen::VectorXd& genome) {
    try {
      const DecisionVector d = decision_from_genome(genome, target, config.gamma);
      const TakeoffPlan plan = decode_and_score(d, initial, target, params, config);
      const double cost = plan.penalties.total_cost;
      return std::isfinite(cost) ? cost : kInvalidCost;
    } catch (const std::exception&) {
      return kInvalidCost;
    }
  };

  JumpSolution out;
  std::vector<Eigen::VectorXd> seeds;
  if (config.initial_guess) seeds.push_back(genome_from_decision(*config.initial_guess));
  out.search = de::optimize_with_restarts(objective, space, config.de, config.restarts, seeds);
  out.plan = decode_and_score(decision_from_genome(out.search.best_vector, target, config.gamma),
                              initial, target, params, config);
  return out;
}

}  // namespace wljump
