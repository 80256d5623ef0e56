/*
Copyright 2026 The risplan Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Deployment search with tabular Q-learning over the space of per-site
// device choices, restarted around the best solutions seen so far.
//
// A state is the mixed-radix number s = sum_i d_i * (V + 1)^i of the
// deployment vector d. Action 2i increments d_i, action 2i + 1 decrements it;
// both saturate. The reward of a move is the change in the joint metric, so
// the return of any trajectory telescopes to M(final) - M(start). Moves
// that would exceed the budget leave the state unchanged with reward 0.

#ifndef RISPLAN_SOLVER_HPP
#define RISPLAN_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "risplan/metrics.hpp"
#include "risplan/scenario.hpp"

namespace risplan {

using StateIndex = std::uint64_t;

// Largest Q-table (rows x columns) the tabular method accepts.
inline constexpr std::uint64_t kMaxQEntries = 10'000'000;

// (V + 1)^N; throws DomainError if it overflows 64 bits.
std::uint64_t state_count(int sites, int devices);
StateIndex encode(const Deployment& d, int devices);
Deployment decode(StateIndex s, int sites, int devices);
Deployment apply_action(const Deployment& d, int action, int devices);

struct Scores {
  double c_s = 0.0;
  double l_s = 0.0;
  double m_s = 0.0;
  double cost = 0.0;
  friend bool operator==(const Scores&, const Scores&) = default;
};

// What the search optimizes over. `evaluate` must be deterministic and
// thread-safe; `cost` must be cheap.
struct SearchSpace {
  int sites = 0;
  int devices = 0;
  double budget = 0.0;
  std::function<double(const Deployment&)> cost;
  std::function<Scores(const Deployment&)> evaluate;

  bool feasible(const Deployment& d) const { return cost(d) <= budget; }
};

// Thread-safe memo of alpha-independent (C_S, L_S) pairs keyed by state,
// so runs with different balances can share metric evaluations.
class AggregateCache {
 public:
  std::optional<std::pair<double, double>> find(StateIndex s) const;
  void insert(StateIndex s, std::pair<double, double> v);
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<StateIndex, std::pair<double, double>> map_;
};

// Search space for a scenario scored by evaluate_deployment. Budget defaults
// to the scenario's.
SearchSpace metric_search_space(const Scenario& s, const MetricConfig& cfg,
                                std::shared_ptr<AggregateCache> cache = nullptr,
                                std::optional<double> budget = std::nullopt);

class EvaluationMemory {
 public:
  // Cached record, or the result of `compute` stored first-writer-wins.
  Scores get_or_compute(StateIndex s, const std::function<Scores()>& compute);
  std::optional<Scores> find(StateIndex s) const;
  size_t size() const;
  std::uint64_t hits() const;
  std::uint64_t misses() const;
  // Entries in ascending state order.
  std::vector<std::pair<StateIndex, Scores>> snapshot() const;

 private:
  mutable std::mutex mu_;
  std::map<StateIndex, Scores> records_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// Non-paper defaults; no values are published for these.
struct SolverConfig {
  double learning_rate = 0.1;
  double discount_factor = 0.9;
  int episodes = 500;
  int steps_per_episode = 50;
  int restart_count = 4;
  double time_budget_s = 0.0;       // 0 = no wall-clock limit
  int no_improvement_restarts = 0;  // 0 = disabled
  std::uint64_t rng_seed = 1;
  std::optional<double> fixed_epsilon;  // overrides the linear schedule
  double refine_fraction = 0.05;        // top share of cached states

  // Throws ValidationError.
  void validate() const;
};

class QTable {
 public:
  QTable(std::uint64_t rows, int cols);
  std::uint64_t rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(StateIndex s, int a) { return q_[s * static_cast<std::uint64_t>(cols_) + a]; }
  double at(StateIndex s, int a) const { return q_[s * static_cast<std::uint64_t>(cols_) + a]; }
  // Lowest index among the maximal entries of row s.
  int greedy(StateIndex s) const;
  double max(StateIndex s) const { return at(s, greedy(s)); }

 private:
  std::uint64_t rows_;
  int cols_;
  std::vector<double> q_;
};

struct StepResult {
  StateIndex next = 0;
  double reward = 0.0;
  bool rejected = false;
};

StepResult step_reward(const SearchSpace& space, EvaluationMemory& memory, StateIndex s,
                       int action);

// Scores of a state through the memory.
Scores evaluate_state(const SearchSpace& space, EvaluationMemory& memory, StateIndex s);

struct TrainResult {
  QTable q;
  StateIndex best = 0;
  Scores best_scores;
};

// One agent. Episodes start uniformly among feasible states, or, when
// `start_pool` is non-empty, at a random pool entry perturbed by one or two
// random feasible moves.
TrainResult train_agent(const SearchSpace& space, EvaluationMemory& memory,
                        const SolverConfig& cfg, std::mt19937_64& rng,
                        const std::vector<StateIndex>& start_pool = {});

struct RestartLog {
  int restart = 0;
  StateIndex best = 0;
  Scores best_scores;
  std::uint64_t hits = 0;    // cumulative
  std::uint64_t misses = 0;  // cumulative
  double hit_rate = 0.0;     // cumulative
  double wall_s = 0.0;
};

struct SearchResult {
  Deployment best;
  StateIndex best_state = 0;
  Scores scores;
  std::vector<RestartLog> log;
  double wall_s = 0.0;
};

SearchResult riloco_search(const SearchSpace& space, const SolverConfig& cfg,
                           EvaluationMemory& memory);
SearchResult riloco_search(const SearchSpace& space, const SolverConfig& cfg);

// Best cached feasible state (ties to the lowest index); nullopt if none.
std::optional<std::pair<StateIndex, Scores>> best_cached(const EvaluationMemory& memory,
                                                         double budget);

struct BudgetRecord {
  double budget = 0.0;
  StateIndex state = 0;
  Deployment deployment;
  Scores scores;
  bool found = false;
};

// Best cached state under each budget.
std::vector<BudgetRecord> budget_sweep(const EvaluationMemory& memory, const SearchSpace& space,
                                       const std::vector<double>& budgets);

// One "key: value" block per restart.
void write_run_log(std::ostream& out, const SearchResult& result, int sites, int devices);

}  // namespace risplan

#endif  // RISPLAN_SOLVER_HPP
