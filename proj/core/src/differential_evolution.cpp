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

#include "wljump/differential_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace wljump::de {

void DEConfig::validate() const {
  if (population_size < 4) {
    throw std::invalid_argument("population_size: must be >= 4 for rand/1 mutation");
  }
  if (!(differential_weight > 0.0 && differential_weight <= 2.0)) {
    throw std::invalid_argument("differential_weight: must lie in (0, 2]");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw std::invalid_argument("crossover_rate: must lie in [0, 1]");
  }
  if (max_generations < 0) throw std::invalid_argument("max_generations: must be >= 0");
}

void SearchSpace::validate() const {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("search space: lower and upper bounds differ in dimension");
  }
  if (lower.size() == 0) throw std::invalid_argument("search space: dimension must be >= 1");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("search space: lower[" + std::to_string(i) + "] must be < upper[" +
                                  std::to_string(i) + "]");
    }
  }
}

bool SearchSpace::contains(const Eigen::VectorXd& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

namespace {

double sanitize(double cost) {
  return std::isnan(cost) ? std::numeric_limits<double>::infinity() : cost;
}

void evaluate_all(const Objective& objective, const std::vector<Eigen::VectorXd>& xs,
                  std::vector<double>& costs, int threads) {
  const std::size_t n = xs.size();
  costs.resize(n);
  std::size_t workers = threads <= 0 ? std::max(1u, std::thread::hardware_concurrency())
                                     : static_cast<std::size_t>(threads);
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) costs[i] = sanitize(objective(xs[i]));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) costs[i] = sanitize(objective(xs[i]));
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

DEResult optimize(const Objective& objective, const SearchSpace& space, const DEConfig& config,
                  std::span<const Eigen::VectorXd> seeds) {
  config.validate();
  space.validate();
  const Eigen::Index dim = space.dim();
  const int np = config.population_size;
  for (const auto& s : seeds) {
    if (s.size() != dim) throw std::invalid_argument("seed individual: dimension mismatch");
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, np - 1);
  std::uniform_int_distribution<Eigen::Index> pick_dim(0, dim - 1);

  std::vector<Eigen::VectorXd> pop(np, Eigen::VectorXd(dim));
  for (auto& x : pop) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      x[j] = space.lower[j] + unit(rng) * (space.upper[j] - space.lower[j]);
    }
  }
  const std::size_t n_seeds = std::min<std::size_t>(seeds.size(), pop.size());
  for (std::size_t i = 0; i < n_seeds; ++i) {
    pop[i] = seeds[i].cwiseMax(space.lower).cwiseMin(space.upper);
  }

  DEResult result;
  std::vector<double> cost;
  evaluate_all(objective, pop, cost, config.threads);
  result.evaluations = np;

  auto best_it = std::min_element(cost.begin(), cost.end());
  std::size_t best = static_cast<std::size_t>(best_it - cost.begin());
  result.cost_history.push_back(cost[best]);

  std::vector<Eigen::VectorXd> trials(np, Eigen::VectorXd(dim));
  std::vector<double> trial_cost;
  int generation = 0;
  while (generation < config.max_generations && !(cost[best] <= config.target_cost)) {
    for (int i = 0; i < np; ++i) {
      int r1, r2, r3;
      do { r1 = pick(rng); } while (r1 == i);
      do { r2 = pick(rng); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);
      const Eigen::Index forced = pick_dim(rng);
      Eigen::VectorXd& trial = trials[i];
      for (Eigen::Index j = 0; j < dim; ++j) {
        const bool cross = unit(rng) < config.crossover_rate || j == forced;
        trial[j] = cross ? pop[r1][j] + config.differential_weight * (pop[r2][j] - pop[r3][j])
                         : pop[i][j];
      }
      trial = trial.cwiseMax(space.lower).cwiseMin(space.upper);
    }

    evaluate_all(objective, trials, trial_cost, config.threads);
    result.evaluations += np;

    for (int i = 0; i < np; ++i) {
      if (trial_cost[i] <= cost[i]) {
        pop[i] = trials[i];
        cost[i] = trial_cost[i];
      }
    }
    best_it = std::min_element(cost.begin(), cost.end());
    best = static_cast<std::size_t>(best_it - cost.begin());
    ++generation;
    result.cost_history.push_back(cost[best]);
  }

  result.best_vector = pop[best];
  result.best_cost = cost[best];
  result.generations_used = generation;
  return result;
}

DEResult optimize_with_restarts(const Objective& objective, const SearchSpace& space,
                                const DEConfig& config, int restarts,
                                std::span<const Eigen::VectorXd> seeds) {
  if (restarts < 1) throw std::invalid_argument("restarts: must be >= 1");
  DEResult best;
  for (int r = 0; r < restarts; ++r) {
    DEConfig run = config;
    run.seed = config.seed + static_cast<std::uint64_t>(r);
    DEResult res = optimize(objective, space, run, seeds);
    if (r == 0 || res.best_cost < best.best_cost) best = std::move(res);
  }
  return best;
}

}  // namespace wljump::de
