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

#include <benchmark/benchmark.h>

#include "wljump/differential_evolution.hpp"
#include "wljump/jump_planner.hpp"
#include "wljump/leg_model.hpp"
#include "wljump/locomotion.hpp"
#include "wljump/verify.hpp"

namespace wljump {
namespace {

PlanarState rest(const RobotParams& p) { return {0.0, p.hip_height_nominal, 0.0, 0.0, 0.0, 0.0}; }

DecisionVector hop() {
  DecisionVector d;
  d.s_half_t1 = {0.005, 0.295, 0.0};
  d.s_t2 = {0.04, 0.36, 0.0};
  d.s_t3 = {0.20, 0.45, 0.0};
  d.t1 = 0.25;
  d.t2 = 0.25;
  d.t3 = 0.55;
  return d;
}

// One objective evaluation, the unit of work inside the DE loop.
void BM_DecodeAndScore(benchmark::State& state) {
  const RobotParams p;
  const PlannerConfig cfg;
  const DecisionVector d = hop();
  const JumpTarget target{0.20, 0.45, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_and_score(d, rest(p), target, p, cfg));
  }
}
BENCHMARK(BM_DecodeAndScore);

void BM_InverseKinematics(benchmark::State& state) {
  const LegGeometry g;
  const Vec2 foot{0.05, -0.3};
  for (auto _ : state) benchmark::DoNotOptimize(inverse_kinematics(foot, g));
}
BENCHMARK(BM_InverseKinematics);

void BM_DeSphere(benchmark::State& state) {
  const auto dim = static_cast<Eigen::Index>(state.range(0));
  de::SearchSpace space{Eigen::VectorXd::Constant(dim, -5.12), Eigen::VectorXd::Constant(dim, 5.12)};
  de::DEConfig cfg;
  cfg.max_generations = 200;
  cfg.target_cost = 0.0;
  const de::Objective sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  for (auto _ : state) benchmark::DoNotOptimize(de::optimize(sphere, space, cfg));
}
BENCHMARK(BM_DeSphere)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Replay(benchmark::State& state) {
  const RobotParams p;
  const TakeoffPlan plan = decode(hop(), rest(p), false, p);
  for (auto _ : state) benchmark::DoNotOptimize(replay(plan, p));
}
BENCHMARK(BM_Replay)->Unit(benchmark::kMillisecond);

void BM_RollingOneSecond(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(simulate_rolling(3.0, 1.0, RobotParams{}, MPCConfig{}));
}
BENCHMARK(BM_RollingOneSecond)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace wljump

BENCHMARK_MAIN();
