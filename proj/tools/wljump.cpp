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

// wljump: plan, replay and benchmark jumps for a planar wheeled-legged model.
//
//   wljump plan <scenario.json>
//   wljump replay <plan.json> [--override key=value ...]
//   wljump debench <sphere|rosenbrock|rastrigin|all> --seed N
//   wljump sweep <scenario.json> --param key --values v1 v2 ...
//
// Exit codes: 0 feasible / success, 1 usage or input error, 2 ran but infeasible.
// WLJUMP_OUTPUT_DIR overrides where artifacts are written.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wljump/differential_evolution.hpp"
#include "wljump/jump_planner.hpp"
#include "wljump/locomotion.hpp"
#include "wljump/plan_io.hpp"
#include "wljump/scenario.hpp"
#include "wljump/verify.hpp"

namespace fs = std::filesystem;
using namespace wljump;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;

fs::path output_dir(const fs::path& fallback) {
  if (const char* env = std::getenv("WLJUMP_OUTPUT_DIR"); env && *env) return env;
  return fallback;
}

std::vector<Override> parse_overrides(const std::vector<std::string>& raw) {
  std::vector<Override> out;
  for (const std::string& r : raw) out.push_back(parse_override(r));
  return out;
}

struct PipelineResult {
  PlanFile file;
  ReplayReport replay;
  RunSummary summary;
};

// Roll-up (optional), solve, replay.
PipelineResult run_pipeline(const Scenario& sc) {
  PipelineResult out;
  PlanarState initial = sc.initial;
  if (sc.prejump_velocity) {
    const RollingHandoff h =
        simulate_rolling_to_speed(*sc.prejump_velocity, sc.robot, sc.locomotion, sc.wheel_limits(), sc.locomotion_max_time);
    if (!h.converged) {
      throw std::runtime_error("roll-up did not settle within " + std::to_string(sc.locomotion_max_time) + " s");
    }
    initial.vx = h.handoff.vx;
    out.summary.handoff_time = h.handoff_time;
    out.summary.handoff_speed = h.handoff.vx;
  }

  const JumpSolution sol = solve(initial, sc.target, sc.robot, sc.planner);
  out.file.scenario_name = sc.name;
  out.file.seed = sc.seed;
  out.file.robot = sc.robot;
  out.file.plan = sol.plan;
  out.file.replay_dt = sc.replay_dt;

  ReplayOptions opts;
  opts.dt = sc.replay_dt;
  out.replay = replay(out.file.plan, sc.robot, opts);
  out.summary.plan_feasible = sol.feasible();
  out.summary.audit_pass = out.replay.audit.pass();
  return out;
}

void print_summary(const PipelineResult& r) {
  const PenaltyReport& pen = r.file.plan.penalties;
  const PhaseSchedule& ph = r.file.plan.phase;
  std::printf("scenario      %s (seed %llu)\n", r.file.scenario_name.c_str(),
              static_cast<unsigned long long>(r.file.seed));
  if (r.summary.handoff_time) {
    std::printf("roll-up       %.3f m/s reached after %.3f s\n", *r.summary.handoff_speed, *r.summary.handoff_time);
  }
  std::printf("phases        t1 %.4f s  t2 %.4f s  t3 %.4f s\n", ph.t1, ph.t2, ph.t3);
  std::printf("plan          %s  cost %.6g  energy %.3f J\n", pen.feasible() ? "FEASIBLE" : "INFEASIBLE",
              pen.total_cost, pen.zeta);
  for (int i = 0; i < kPenaltyClassCount; ++i) {
    const auto k = static_cast<PenaltyClass>(i);
    std::printf("  %-15s sigma %-12.4g W %d\n", std::string(to_string(k)).c_str(), pen.sigma[i], pen.weight[i]);
  }
  const ReplayReport& rep = r.replay;
  std::printf("replay        dt %.2e s  apex %.4f m  terminal error x %.2e m  z %.2e m  theta %.2e rad\n",
              rep.dt_used, rep.apex_height, rep.terminal_error.x(), rep.terminal_error.y(), rep.terminal_error.z());
  std::printf("peaks         torque hip %.2f knee %.2f Nm  velocity hip %.2f knee %.2f rad/s\n", rep.peak_torque.x(),
              rep.peak_torque.y(), rep.peak_velocity.x(), rep.peak_velocity.y());
  std::printf("audit         %s", rep.audit.pass() ? "pass" : "FLAGGED:");
  for (int i = 1; i < kPenaltyClassCount; ++i) {
    const auto k = static_cast<PenaltyClass>(i);
    if (rep.audit.flagged(k)) {
      std::printf(" %s (%.3g at t=%.4f s)", std::string(to_string(k)).c_str(), rep.audit.max_violation[i],
                  rep.audit.worst_time[i]);
    }
  }
  std::printf("\n");
}

int cmd_plan(const std::string& scenario_path) {
  Scenario sc;
  try {
    sc = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  PipelineResult r;
  try {
    r = run_pipeline(sc);
  } catch (const SpeedSaturation& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::runtime_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }

  const fs::path dir = output_dir(sc.output.directory);
  write_text(dir / sc.output.plan_file, plan_to_json(r.file));
  write_text(dir / sc.output.trajectory_file, trajectory_csv(r.replay));
  write_text(dir / sc.output.report_file, report_to_json(r.file, r.replay, r.summary));
  print_summary(r);
  std::printf("artifacts     %s\n", dir.string().c_str());
  if (!r.summary.plan_feasible) {
    std::printf("result        INFEASIBLE (violated:");
    for (int i = 0; i < kPenaltyClassCount; ++i) {
      if (r.file.plan.penalties.violated_mask & (1u << i)) {
        std::printf(" %s", std::string(to_string(static_cast<PenaltyClass>(i))).c_str());
      }
    }
    std::printf(")\n");
    return kExitInfeasible;
  }
  if (!r.summary.audit_pass) {
    std::printf("result        INFEASIBLE (replay audit flagged)\n");
    return kExitInfeasible;
  }
  std::printf("result        FEASIBLE\n");
  return kExitOk;
}

int cmd_replay(const std::string& plan_path, const std::vector<std::string>& raw_overrides,
               double terminal_tolerance) {
  PlanFile file;
  try {
    file = load_plan(plan_path, parse_overrides(raw_overrides));
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  ReplayOptions opts;
  opts.dt = file.replay_dt;
  PipelineResult r;
  r.file = file;
  r.replay = replay(file.plan, file.robot, opts);
  r.summary.plan_feasible = file.plan.penalties.feasible();
  r.summary.audit_pass = r.replay.audit.pass();

  const fs::path dir = output_dir(fs::path(plan_path).parent_path());
  write_text(dir / "replay_trajectory.csv", trajectory_csv(r.replay));
  write_text(dir / "replay_report.json", report_to_json(r.file, r.replay, r.summary));
  print_summary(r);

  const bool on_target = r.replay.terminal_error.maxCoeff() < terminal_tolerance;
  if (!r.summary.audit_pass || !on_target) {
    std::printf("result        INFEASIBLE (%s)\n", r.summary.audit_pass ? "terminal error" : "replay audit flagged");
    return kExitInfeasible;
  }
  std::printf("result        FEASIBLE\n");
  return kExitOk;
}

struct BenchFunction {
  std::string name;
  int dim;
  double lo;
  double hi;
  de::Objective f;
};

std::vector<BenchFunction> bench_suite(const std::string& suite) {
  const BenchFunction sphere{"sphere", 10, -5.12, 5.12,
                             [](const Eigen::VectorXd& x) { return x.squaredNorm(); }};
  const BenchFunction rosenbrock{"rosenbrock", 2, -2.048, 2.048, [](const Eigen::VectorXd& x) {
                                   double s = 0.0;
                                   for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
                                     s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
                                   }
                                   return s;
                                 }};
  const BenchFunction rastrigin{"rastrigin", 5, -5.12, 5.12, [](const Eigen::VectorXd& x) {
                                  double s = 10.0 * static_cast<double>(x.size());
                                  for (Eigen::Index i = 0; i < x.size(); ++i) {
                                    s += x[i] * x[i] - 10.0 * std::cos(2.0 * std::numbers::pi * x[i]);
                                  }
                                  return s;
                                }};
  if (suite == "sphere") return {sphere};
  if (suite == "rosenbrock") return {rosenbrock};
  if (suite == "rastrigin") return {rastrigin};
  if (suite == "all") return {sphere, rosenbrock, rastrigin};
  return {};
}

int cmd_debench(const std::string& suite, std::uint64_t seed) {
  const std::vector<BenchFunction> fns = bench_suite(suite);
  if (fns.empty()) {
    std::cerr << "error: unknown suite '" << suite << "' (expected sphere, rosenbrock, rastrigin or all)\n";
    return kExitInput;
  }
  std::printf("function\tdim\tbest_cost\tgenerations\tevaluations\n");
  for (const BenchFunction& fn : fns) {
    de::DEConfig cfg;
    cfg.seed = seed;
    cfg.target_cost = 1e-12;
    de::SearchSpace space;
    space.lower = Eigen::VectorXd::Constant(fn.dim, fn.lo);
    space.upper = Eigen::VectorXd::Constant(fn.dim, fn.hi);
    const de::DEResult res = de::optimize(fn.f, space, cfg);
    std::printf("%s\t%d\t%.6e\t%d\t%lld\n", fn.name.c_str(), fn.dim, res.best_cost, res.generations_used,
                static_cast<long long>(res.evaluations));
  }
  return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& key, const std::vector<std::string>& values) {
  std::vector<Scenario> runs;
  try {
    for (const std::string& v : values) {
      const Override o{key, v};
      runs.push_back(load_scenario(scenario_path, std::span<const Override>(&o, 1)));
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (runs.empty()) {
    std::cerr << "error: --values needs at least one value\n";
    return kExitInput;
  }

  std::string table =
      "value,plan_feasible,audit_pass,total_cost,energy_J,terminal_err_x_m,terminal_err_z_m,"
      "terminal_err_theta_rad,apex_m,peak_tau_hip_Nm,peak_tau_knee_Nm,peak_qd_hip_radps,peak_qd_knee_radps\n";
  std::printf("%-12s %-8s %-6s %-12s %-10s %-10s\n", key.c_str(), "feasible", "audit", "cost", "apex_m", "tau_knee");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char line[512];
    try {
      const PipelineResult r = run_pipeline(runs[i]);
      const ReplayReport& rep = r.replay;
      std::snprintf(line, sizeof line, "%s,%d,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                    values[i].c_str(), r.summary.plan_feasible, r.summary.audit_pass,
                    r.file.plan.penalties.total_cost, r.file.plan.penalties.zeta, rep.terminal_error.x(),
                    rep.terminal_error.y(), rep.terminal_error.z(), rep.apex_height, rep.peak_torque.x(),
                    rep.peak_torque.y(), rep.peak_velocity.x(), rep.peak_velocity.y());
      std::printf("%-12s %-8s %-6s %-12.6g %-10.4f %-10.2f\n", values[i].c_str(),
                  r.summary.plan_feasible ? "yes" : "no", r.summary.audit_pass ? "pass" : "flag",
                  r.file.plan.penalties.total_cost, rep.apex_height, rep.peak_torque.y());
    } catch (const std::runtime_error& e) {
      std::snprintf(line, sizeof line, "%s,0,0,nan,nan,nan,nan,nan,nan,nan,nan,nan,nan\n", values[i].c_str());
      std::printf("%-12s failed: %s\n", values[i].c_str(), e.what());
    }
    table += line;
    std::fflush(stdout);
  }
  const fs::path dir = output_dir(runs.front().output.directory);
  write_text(dir / "sweep.csv", table);
  std::printf("artifacts     %s\n", (dir / "sweep.csv").string().c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jump planning for a planar wheeled-legged robot model"};
  app.require_subcommand(1);

  std::string scenario_path;
  auto* plan = app.add_subcommand("plan", "Roll up (optional), plan the jump, replay and audit it");
  plan->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  std::string plan_path;
  std::vector<std::string> overrides;
  double terminal_tolerance = 0.05;
  auto* rep = app.add_subcommand("replay", "Replay a saved plan and audit it densely");
  rep->add_option("plan", plan_path, "Plan JSON file written by 'plan'")->required();
  rep->add_option("--override", overrides, "key=value (mu, tau_max, qd_max, dt or a dotted path)");
  rep->add_option("--terminal-tolerance", terminal_tolerance, "Largest accepted terminal error per coordinate")
      ->check(CLI::PositiveNumber);

  std::string suite;
  std::uint64_t seed = 1;
  auto* bench = app.add_subcommand("debench", "Run the DE engine on standard test functions");
  bench->add_option("suite", suite, "sphere, rosenbrock, rastrigin or all")->required();
  bench->add_option("--seed", seed, "RNG seed")->required();

  std::string sweep_scenario;
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Grid study over one scenario field");
  sweep->add_option("scenario", sweep_scenario, "Scenario JSON file")->required();
  sweep->add_option("--param", sweep_key, "Dotted scenario path or alias (mu, tau_max, qd_max, dt)")->required();
  sweep->add_option("--values", sweep_values, "Values to try")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*plan) return cmd_plan(scenario_path);
    if (*rep) return cmd_replay(plan_path, overrides, terminal_tolerance);
    if (*bench) return cmd_debench(suite, seed);
    if (*sweep) return cmd_sweep(sweep_scenario, sweep_key, sweep_values);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
