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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Usage: wljump_acceptance [scenario_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "polyfit.hpp"
#include "wljump/differential_evolution.hpp"
#include "wljump/jump_planner.hpp"
#include "wljump/leg_model.hpp"
#include "wljump/locomotion.hpp"
#include "wljump/planar_dynamics.hpp"
#include "wljump/scenario.hpp"
#include "wljump/verify.hpp"

namespace fs = std::filesystem;
using namespace wljump;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances pinned by the acceptance criteria.
constexpr double kTerminalTol = 0.05;           // m and rad
constexpr double kRuntimeLimit = 60.0;          // s
constexpr double kApexTarget = 0.7;             // m
constexpr double kBackflipAngleTol = 0.1;       // rad
constexpr double kSpeedCap = 40.0 * 0.085;      // m/s
constexpr double kConvergeBand = 0.1;           // m/s
constexpr double kConvergeTime = 2.0;           // s
constexpr double kSphereTol = 1e-8;
constexpr double kRosenbrockTol = 1e-6;
constexpr double kParabolaTol = 1e-9;           // m
constexpr double kJacobianTol = 1e-6;
constexpr double kRoundTripTol = 1e-10;
constexpr double kWrenchTol = 1e-10;
constexpr double kFeasibleCeiling = 1e4;
constexpr double kTorqueTier = 1e8;
constexpr double kFitTol = 1e-8;

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("[%s] criterion %d: %s | %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Run {
  Scenario scenario;
  JumpSolution solution;
  ReplayReport replay;
  double seconds = 0.0;
};

Run run_scenario(const fs::path& path) {
  Run r;
  r.scenario = load_scenario(path);
  const auto t0 = std::chrono::steady_clock::now();
  PlanarState initial = r.scenario.initial;
  if (r.scenario.prejump_velocity) {
    const RollingHandoff h = simulate_rolling_to_speed(*r.scenario.prejump_velocity, r.scenario.robot,
                                                       r.scenario.locomotion, r.scenario.wheel_limits(),
                                                       r.scenario.locomotion_max_time);
    initial.vx = h.handoff.vx;
  }
  r.solution = solve(initial, r.scenario.target, r.scenario.robot, r.scenario.planner);
  ReplayOptions o;
  o.dt = r.scenario.replay_dt;
  r.replay = replay(r.solution.plan, r.scenario.robot, o);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool profiles_in_family(const TakeoffPlan& plan, double* worst) {
  double w = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    std::vector<double> t1, h1, f1, t2, h2;
    for (const TakeoffSample& s : plan.step1_samples) {
      t1.push_back(s.t);
      h1.push_back(s.f_hind[comp]);
      f1.push_back(s.f_front[comp]);
    }
    for (const TakeoffSample& s : plan.step2_samples) {
      t2.push_back(s.t);
      h2.push_back(s.f_hind[comp]);
    }
    w = std::max({w, testing_support::relative_fit_residual(t1, h1, 1),
                  testing_support::relative_fit_residual(t1, f1, 1),
                  testing_support::relative_fit_residual(t2, h2, 2)});
  }
  *worst = std::max(*worst, w);
  return w < kFitTol;
}

void criterion1(const Run& fwd) {
  const Vec3 e = fwd.replay.terminal_error;
  const bool pass = fwd.solution.feasible() && e.x() < kTerminalTol && e.y() < kTerminalTol &&
                    e.z() < kTerminalTol && fwd.seconds < kRuntimeLimit;
  report(1, pass, "forward jump (0.6, 0.7, 0) from 3 m/s at 60 Nm",
         fmt("feasible=%.0f terminal err x=%.2e m z=%.2e m theta=%.2e rad", fwd.solution.feasible(), e.x(), e.y(),
             e.z()) +
             fmt(" runtime=%.1f s apex=%.3f m audit=", fwd.seconds, fwd.replay.apex_height) +
             (fwd.replay.audit.pass() ? "pass" : "flagged"));
}

void criterion2(const Run& vert) {
  const double apex_err = std::abs(vert.replay.apex_height - kApexTarget);
  const double x3 = std::abs(vert.replay.terminal_state.x);
  const bool pass = vert.solution.feasible() && apex_err < kTerminalTol && x3 < kTerminalTol;
  report(2, pass, "vertical jump to 0.7 m",
         fmt("feasible=%.0f apex=%.4f m |x(t3)|=%.2e m runtime=%.1f s", vert.solution.feasible(),
             vert.replay.apex_height, x3, vert.seconds));
}

void criterion3(const Run& hw, const Run& relaxed) {
  const PenaltyReport& pen = hw.solution.plan.penalties;
  const bool hw_ok = !pen.feasible() && (pen.weight_of(PenaltyClass::JointTorque) == 1 ||
                                         pen.weight_of(PenaltyClass::JointVelocity) == 1);
  std::string violated;
  for (int i = 0; i < kPenaltyClassCount; ++i) {
    if (pen.weight[i]) violated += std::string(violated.empty() ? "" : ",") + std::string(to_string(PenaltyClass(i)));
  }
  const double theta_err = std::abs(relaxed.replay.terminal_state.theta - 2.5 * kPi);
  const bool relaxed_ok = relaxed.solution.feasible() && theta_err < kBackflipAngleTol;
  report(3, hw_ok && relaxed_ok, "backflip: infeasible at 42 Nm/40 rad/s via torque or velocity, feasible at 100/80",
         "42/40: feasible=" + std::to_string(pen.feasible()) + " violated=[" + violated + "]" +
             fmt(" W_torque=%.0f W_velocity=%.0f cost=%.6g;", pen.weight_of(PenaltyClass::JointTorque),
                 pen.weight_of(PenaltyClass::JointVelocity), pen.total_cost) +
             fmt(" 100/80: feasible=%.0f |theta(t3)-5pi/2|=%.3f rad runtime=%.1f s", relaxed.solution.feasible(),
                 theta_err, relaxed.seconds));
}

void criterion4() {
  const RobotParams p;
  const MPCConfig c;
  const RollingTrajectory fast = simulate_rolling(5.0, 5.0, p, c);
  const double vmax = fast.max_vx();
  const RollingTrajectory cruise = simulate_rolling(3.0, 4.0, p, c);
  double last_outside = 0.0;
  for (const RollingSample& s : cruise.samples) {
    if (std::abs(s.vx - 3.0) >= kConvergeBand) last_outside = s.t;
  }
  const bool pass = vmax <= kSpeedCap && last_outside < kConvergeTime;
  report(4, pass, "wheel speed cap and 3 m/s convergence",
         fmt("max vx at 5 m/s command=%.4f m/s (cap %.2f); 3 m/s command inside +-0.1 from t=%.3f s, vx(4s)=%.4f",
             vmax, kSpeedCap, last_outside, cruise.samples.back().vx));
}

void criterion5() {
  de::DEConfig cfg;
  cfg.target_cost = 0.0;  // run the full default generation budget
  cfg.seed = 2024;
  const de::Objective sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  const de::Objective rosen = [](const Eigen::VectorXd& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const de::SearchSpace s10{Eigen::VectorXd::Constant(10, -5.0), Eigen::VectorXd::Constant(10, 5.0)};
  const de::SearchSpace s2{Eigen::VectorXd::Constant(2, -5.0), Eigen::VectorXd::Constant(2, 5.0)};
  const de::DEResult a = de::optimize(sphere, s10, cfg);
  const de::DEResult a2 = de::optimize(sphere, s10, cfg);
  const de::DEResult b = de::optimize(rosen, s2, cfg);
  const de::DEResult b2 = de::optimize(rosen, s2, cfg);
  const bool identical = a.best_vector == a2.best_vector && a.cost_history == a2.cost_history &&
                         b.best_vector == b2.best_vector && b.cost_history == b2.cost_history;
  bool monotone = true;
  for (const de::DEResult* r : {&a, &b}) {
    for (std::size_t i = 1; i < r->cost_history.size(); ++i) monotone &= r->cost_history[i] <= r->cost_history[i - 1];
  }
  const bool pass = a.best_cost < kSphereTol && b.best_cost < kRosenbrockTol && identical && monotone;
  report(5, pass, "DE qualification",
         fmt("sphere10=%.3e rosenbrock2=%.3e generations=%.0f", a.best_cost, b.best_cost, a.generations_used) +
             " bit-identical=" + (identical ? "yes" : "no") + " non-increasing=" + (monotone ? "yes" : "no"));
}

void criterion6() {
  const RobotParams p;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Ballistic replay against the parabola, using a decoded hop.
  DecisionVector d;
  d.s_half_t1 = {0.01, 0.295, 0.0};
  d.s_t2 = {0.06, 0.36, 0.0};
  d.s_t3 = {0.35, 0.45, 0.0};
  d.t1 = 0.25;
  d.t2 = 0.25;
  d.t3 = 0.55;
  const TakeoffPlan hop = decode(d, {0.0, p.hip_height_nominal, 0.0, 0.0, 0.0, 0.0}, false, p);
  const ReplayReport rr = replay(hop, p);
  double parabola_err = 0.0;
  const ReplaySample* takeoff = nullptr;
  for (const ReplaySample& s : rr.samples) {
    if (s.phase_id != 3) continue;
    if (!takeoff) takeoff = &s;
    const double T = s.t - takeoff->t;
    parabola_err = std::max({parabola_err, std::abs(s.state.x - (takeoff->state.x + takeoff->state.vx * T)),
                             std::abs(s.state.z - (takeoff->state.z + takeoff->state.vz * T - 0.5 * p.gravity * T * T))});
  }

  // Jacobian vs central differences.
  const LegGeometry g{0.2, 0.2, 0.0, 0.085};
  double jac_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const JointState j{2.5 * u(rng), 2.5 * u(rng), 0, 0};
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      JointState a = j, b = j;
      (c == 0 ? a.q_hip : a.q_knee) += h;
      (c == 0 ? b.q_hip : b.q_knee) -= h;
      const Vec2 fd = (forward_kinematics(a, g) - forward_kinematics(b, g)) / (2.0 * h);
      jac_err = std::max(jac_err, (jacobian(j, g).col(c) - fd).cwiseAbs().maxCoeff());
    }
  }

  // FK(IK(p)) on both branches.
  double ik_err = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double r = 0.01 + 0.389 * (0.5 * (u(rng) + 1.0));
    const double a = kPi * u(rng);
    const Vec2 target{r * std::sin(a), -r * std::cos(a)};
    for (KneeBranch b : {KneeBranch::Backward, KneeBranch::Forward}) {
      ik_err = std::max(ik_err, (forward_kinematics(inverse_kinematics(target, g, b), g) - target).norm());
    }
  }

  // Two-contact wrench reconstruction.
  double wrench_err = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vec2 com{u(rng), 0.3 + 0.1 * u(rng)};
    const std::array<ContactPoint, 2> c{
        {{LegSide::Hind, {com.x() - 0.2 + 0.05 * u(rng), 0.0}}, {LegSide::Front, {com.x() + 0.2 + 0.05 * u(rng), 0.0}}}};
    const Vec2 net{300.0 * u(rng), 500.0 + 300.0 * u(rng)};
    const double torque = 60.0 * u(rng);
    const ForceDistribution fd = distribute_forces(net, torque, c, com);
    const double moment = cross2(c[0].position - com, fd.f_hind) + cross2(c[1].position - com, fd.f_front);
    const double scale = 1.0 + net.norm() + std::abs(torque);
    wrench_err = std::max({wrench_err, (fd.f_hind + fd.f_front - net).norm() / scale, std::abs(moment - torque) / scale});
  }

  const bool pass = parabola_err < kParabolaTol && jac_err < kJacobianTol && ik_err < kRoundTripTol &&
                    wrench_err < kWrenchTol;
  report(6, pass, "numerical oracles",
         fmt("parabola=%.2e m jacobian=%.2e fk(ik)=%.2e wrench(rel)=%.2e", parabola_err, jac_err, ik_err, wrench_err));
}

void criterion7() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool dominance = true;
  double min_infeasible = 1e300;
  double max_feasible = 0.0;
  for (int i = 0; i < 100000; ++i) {
    std::array<double, kPenaltyClassCount> sigma{};
    for (double& s : sigma) s = u(rng) < 0.15 ? std::pow(10.0, -6.0 + 9.0 * u(rng)) : 0.0;
    const double zeta = 9999.999 * u(rng);
    const PenaltyReport r = assemble_penalty(sigma, zeta, 1e-6, PenaltyWeighting::Indicator);
    if (r.feasible()) {
      max_feasible = std::max(max_feasible, r.total_cost);
      dominance &= r.total_cost < kFeasibleCeiling;
    } else {
      min_infeasible = std::min(min_infeasible, r.total_cost);
      dominance &= r.total_cost >= kFeasibleCeiling;
    }
  }

  // 57 Nm knee torque against a 42 Nm limit on an otherwise clean plan.
  const RobotParams p;
  const PlanarState s0{0.0, p.hip_height_nominal, 0.0, 0.0, 0.0, 0.0};
  DecisionVector d;
  d.s_half_t1 = s0.pose();
  d.s_t2 = s0.pose();
  d.s_t3 = {0.0, s0.z - 0.5 * p.gravity * 0.05 * 0.05, 0.0};
  d.t1 = d.t2 = 0.3;
  d.t3 = 0.35;
  PlannerConfig cfg;
  cfg.limits.tau_max = 42.0;
  cfg.limit_margin = 0.0;
  TakeoffPlan plan = decode(d, s0, false, p);
  plan.step1_samples[plan.step1_samples.size() / 2].legs[0].torque = {0.0, 57.0};
  const PenaltyReport r = evaluate_penalties(plan, {d.s_t3.x(), d.s_t3.y(), d.s_t3.z()}, cfg, p);
  const bool torque_ok = r.total_cost >= kTorqueTier && r.weight_of(PenaltyClass::JointTorque) == 1;

  report(7, dominance && torque_ok, "penalty structure",
         fmt("max feasible cost=%.2f min infeasible cost=%.4g 57-vs-42 Nm total=%.4g sigma_torque=%.2f", max_feasible,
             min_infeasible, r.total_cost, r.sigma_of(PenaltyClass::JointTorque)));
}

void criterion8(const std::vector<const Run*>& runs) {
  double worst = 0.0;
  bool pass = true;
  int checked = 0;
  for (const Run* r : runs) {
    pass &= profiles_in_family(r->solution.plan, &worst);
    ++checked;
  }
  // Random genomes from the search box, both gate settings.
  const RobotParams p;
  const PlanarState s0{0.0, p.hip_height_nominal, 0.0, 0.0, 0.0, 0.0};
  std::mt19937_64 rng(808);
  for (bool gamma : {false, true}) {
    const de::SearchSpace space = jump_search_space(JumpSearchBounds{}, s0, gamma);
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd genome(kGenomeSize);
      for (int k = 0; k < kGenomeSize; ++k) {
        genome[k] = std::uniform_real_distribution<double>(space.lower[k], space.upper[k])(rng);
      }
      const TakeoffPlan plan = decode(decision_from_genome(genome, {0.0, 0.7, 0.0}, gamma), s0, gamma, p);
      pass &= profiles_in_family(plan, &worst);
      ++checked;
    }
  }
  report(8, pass, "force profiles affine in step 1, quadratic in step 2",
         fmt("%.0f plans checked, worst relative fit residual=%.2e", checked, worst));
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path(WLJUMP_SCENARIO_DIR);
  try {
    const Run fwd = run_scenario(dir / "forward_jump.json");
    criterion1(fwd);
    const Run vert = run_scenario(dir / "vertical_jump.json");
    criterion2(vert);
    const Run hw = run_scenario(dir / "backflip_hardware.json");
    const Run relaxed = run_scenario(dir / "backflip_relaxed.json");
    criterion3(hw, relaxed);
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8({&fwd, &vert, &hw, &relaxed});
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
