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

// Deterministic DE/rand/1/bin with bound clamping.
//
// Replacement is generational: all trial vectors of a generation are built
// from the previous population using one seeded random stream on the calling
// thread, then evaluated (optionally in parallel), then selected. The result is
// therefore identical for any thread count.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace wljump::de {

struct DEConfig {
  int population_size = 50;
  double differential_weight = 0.7;  // F
  double crossover_rate = 0.9;       // CR
  int max_generations = 1500;
  double target_cost = 1.0;  // stop once best <= target_cost
  std::uint64_t seed = 1;
  int threads = 1;  // evaluation workers; <= 0 uses hardware concurrency

  void validate() const;
};

struct SearchSpace {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  void validate() const;
  [[nodiscard]] Eigen::Index dim() const { return lower.size(); }
  [[nodiscard]] bool contains(const Eigen::VectorXd& x) const;
};

/// Must be reentrant when DEConfig::threads != 1.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct DEResult {
  Eigen::VectorXd best_vector;
  double best_cost = 0.0;
  int generations_used = 0;
  /// Best cost after initialisation (index 0) and after every generation.
  std::vector<double> cost_history;
  std::int64_t evaluations = 0;
};

/**
 * Minimises objective over space.
 *
 * seeds are optional warm-start individuals; they replace the first members of
 * the random initial population (after clamping) but do not consume a
 * different amount of randomness, so runs with and without seeds draw the
 * same stream.
 *
 * Throws std::invalid_argument on a dimension mismatch or invalid config.
 */
DEResult optimize(const Objective& objective, const SearchSpace& space, const DEConfig& config,
                  std::span<const Eigen::VectorXd> seeds = {});

/// Runs optimize with seeds config.seed, config.seed + 1, ... and keeps the
/// lowest-cost run (earliest on ties). Requires restarts >= 1.
DEResult optimize_with_restarts(const Objective& objective, const SearchSpace& space,
                                const DEConfig& config, int restarts,
                                std::span<const Eigen::VectorXd> seeds = {});

}  // namespace wljump::de
