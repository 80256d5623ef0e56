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

#include "risplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "risplan/error.hpp"

namespace risplan {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Strict "a ranks above b": higher M_S, then lower state index.
bool ranks_above(const std::pair<StateIndex, Scores>& a, const std::pair<StateIndex, Scores>& b) {
  if (a.second.m_s != b.second.m_s) return a.second.m_s > b.second.m_s;
  return a.first < b.first;
}

std::vector<StateIndex> feasible_states(const SearchSpace& space) {
  const std::uint64_t n = state_count(space.sites, space.devices);
  std::vector<StateIndex> out;
  for (StateIndex s = 0; s < n; ++s) {
    if (space.feasible(decode(s, space.sites, space.devices))) out.push_back(s);
  }
  return out;
}

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<size_t> dist(0, v.size() - 1);
  return v[dist(rng)];
}

TrainResult train_until(const SearchSpace& space, EvaluationMemory& memory,
                        const SolverConfig& cfg, std::mt19937_64& rng,
                        const std::vector<StateIndex>& start_pool,
                        const std::vector<StateIndex>& feasible,
                        std::optional<Clock::time_point> deadline) {
  const int actions = 2 * space.sites;
  TrainResult out{QTable(state_count(space.sites, space.devices), actions), 0, {}};
  bool have_best = false;
  auto consider = [&](StateIndex s, const Scores& sc) {
    if (!have_best || ranks_above({s, sc}, {out.best, out.best_scores})) {
      out.best = s;
      out.best_scores = sc;
      have_best = true;
    }
  };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> any_action(0, actions - 1);
  std::uniform_int_distribution<int> perturb_count(1, 2);

  for (int e = 0; e < cfg.episodes; ++e) {
    if (deadline && Clock::now() >= *deadline) break;
    const double eps =
        cfg.fixed_epsilon ? *cfg.fixed_epsilon
                          : 1.0 - static_cast<double>(e) / std::max(1, cfg.episodes - 1);

    StateIndex s = 0;
    if (start_pool.empty()) {
      s = pick(feasible, rng);
    } else {
      s = pick(start_pool, rng);
      const int moves = perturb_count(rng);
      for (int k = 0; k < moves; ++k) {
        const Deployment cand =
            apply_action(decode(s, space.sites, space.devices), any_action(rng), space.devices);
        if (space.feasible(cand)) s = encode(cand, space.devices);
      }
    }
    consider(s, evaluate_state(space, memory, s));

    for (int t = 0; t < cfg.steps_per_episode; ++t) {
      const int a = unit(rng) < eps ? any_action(rng) : out.q.greedy(s);
      const StepResult r = step_reward(space, memory, s, a);
      double& q = out.q.at(s, a);
      q = (1.0 - cfg.learning_rate) * q +
          cfg.learning_rate * (r.reward + cfg.discount_factor * out.q.max(r.next));
      if (!r.rejected && r.next != s) consider(r.next, *memory.find(r.next));
      s = r.next;
    }
  }
  return out;
}

}  // namespace

std::uint64_t state_count(int sites, int devices) {
  if (sites < 1 || devices < 0) throw DomainError("state_count: need N >= 1 and V >= 0");
  std::uint64_t n = 1;
  const std::uint64_t m = static_cast<std::uint64_t>(devices) + 1;
  for (int i = 0; i < sites; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / m) {
      throw DomainError("state space exceeds 64-bit indexing");
    }
    n *= m;
  }
  return n;
}

StateIndex encode(const Deployment& d, int devices) {
  const std::uint64_t m = static_cast<std::uint64_t>(devices) + 1;
  StateIndex s = 0;
  for (size_t i = d.choices.size(); i-- > 0;) {
    const int c = d.choices[i];
    if (c < 0 || c > devices) throw DomainError("encode: device index out of range");
    s = s * m + static_cast<std::uint64_t>(c);
  }
  return s;
}

Deployment decode(StateIndex s, int sites, int devices) {
  if (s >= state_count(sites, devices)) throw DomainError("decode: state index out of range");
  const std::uint64_t m = static_cast<std::uint64_t>(devices) + 1;
  Deployment d;
  d.choices.resize(static_cast<size_t>(sites));
  for (int i = 0; i < sites; ++i) {
    d.choices[static_cast<size_t>(i)] = static_cast<int>(s % m);
    s /= m;
  }
  return d;
}

Deployment apply_action(const Deployment& d, int action, int devices) {
  const int sites = static_cast<int>(d.choices.size());
  if (action < 0 || action >= 2 * sites) throw DomainError("apply_action: action out of range");
  Deployment out = d;
  int& c = out.choices[static_cast<size_t>(action / 2)];
  if (action % 2 == 0) {
    c = std::min(c + 1, devices);
  } else {
    c = std::max(c - 1, 0);
  }
  return out;
}

std::optional<std::pair<double, double>> AggregateCache::find(StateIndex s) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = map_.find(s);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void AggregateCache::insert(StateIndex s, std::pair<double, double> v) {
  std::lock_guard<std::mutex> lock(mu_);
  map_.emplace(s, v);
}

size_t AggregateCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

SearchSpace metric_search_space(const Scenario& s, const MetricConfig& cfg,
                                std::shared_ptr<AggregateCache> cache,
                                std::optional<double> budget) {
  cfg.validate();
  SearchSpace space;
  space.sites = s.site_count();
  space.devices = s.device_count();
  space.budget = budget.value_or(s.budget_total);
  const Scenario* sp = &s;
  space.cost = [sp](const Deployment& d) { return deployment_cost(*sp, d); };
  const int devices = space.devices;
  space.evaluate = [sp, cfg, cache, devices](const Deployment& d) {
    const StateIndex key = encode(d, devices);
    std::pair<double, double> cl;
    if (auto hit = cache ? cache->find(key) : std::nullopt) {
      cl = *hit;
    } else {
      const MetricMaps m = evaluate_deployment(*sp, d, cfg);
      cl = {m.c_s, m.l_s};
      if (cache) cache->insert(key, cl);
    }
    return Scores{cl.first, cl.second, joint_metric(cfg.balance_alpha, cl.first, cl.second),
                  deployment_cost(*sp, d)};
  };
  return space;
}

Scores EvaluationMemory::get_or_compute(StateIndex s, const std::function<Scores()>& compute) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = records_.find(s);
    if (it != records_.end()) {
      ++hits_;
      return it->second;
    }
    ++misses_;
  }
  // Computed outside the lock; a concurrent duplicate is discarded.
  const Scores fresh = compute();
  std::lock_guard<std::mutex> lock(mu_);
  return records_.emplace(s, fresh).first->second;
}

std::optional<Scores> EvaluationMemory::find(StateIndex s) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = records_.find(s);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

size_t EvaluationMemory::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

std::uint64_t EvaluationMemory::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

std::uint64_t EvaluationMemory::misses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return misses_;
}

std::vector<std::pair<StateIndex, Scores>> EvaluationMemory::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return {records_.begin(), records_.end()};
}

void SolverConfig::validate() const {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ValidationError("learning_rate", "must lie in (0, 1]");
  }
  if (!(discount_factor >= 0.0 && discount_factor < 1.0)) {
    throw ValidationError("discount_factor", "must lie in [0, 1)");
  }
  if (episodes < 1) throw ValidationError("episodes", "must be >= 1");
  if (steps_per_episode < 1) throw ValidationError("steps_per_episode", "must be >= 1");
  if (restart_count < 1) throw ValidationError("restart_count", "must be >= 1");
  if (!(time_budget_s >= 0.0)) throw ValidationError("time_budget_s", "must be >= 0");
  if (no_improvement_restarts < 0) throw ValidationError("no_improvement_restarts", "must be >= 0");
  if (fixed_epsilon && !(*fixed_epsilon >= 0.0 && *fixed_epsilon <= 1.0)) {
    throw ValidationError("fixed_epsilon", "must lie in [0, 1]");
  }
  if (!(refine_fraction > 0.0 && refine_fraction <= 1.0)) {
    throw ValidationError("refine_fraction", "must lie in (0, 1]");
  }
}

QTable::QTable(std::uint64_t rows, int cols) : rows_(rows), cols_(cols) {
  if (cols < 1) throw DomainError("QTable: need at least one action");
  if (rows > kMaxQEntries / static_cast<std::uint64_t>(cols)) {
    throw DomainError("state space too large for a tabular Q-table (" + std::to_string(rows) +
                      " x " + std::to_string(cols) + ")");
  }
  q_.assign(rows * static_cast<std::uint64_t>(cols), 0.0);
}

int QTable::greedy(StateIndex s) const {
  int best = 0;
  for (int a = 1; a < cols_; ++a) {
    if (at(s, a) > at(s, best)) best = a;
  }
  return best;
}

Scores evaluate_state(const SearchSpace& space, EvaluationMemory& memory, StateIndex s) {
  return memory.get_or_compute(
      s, [&] { return space.evaluate(decode(s, space.sites, space.devices)); });
}

StepResult step_reward(const SearchSpace& space, EvaluationMemory& memory, StateIndex s,
                       int action) {
  const Deployment current = decode(s, space.sites, space.devices);
  const Deployment cand = apply_action(current, action, space.devices);
  if (!space.feasible(cand)) return {s, 0.0, true};
  const StateIndex next = encode(cand, space.devices);
  if (next == s) return {s, 0.0, false};
  const double here = evaluate_state(space, memory, s).m_s;
  const double there = evaluate_state(space, memory, next).m_s;
  return {next, there - here, false};
}

TrainResult train_agent(const SearchSpace& space, EvaluationMemory& memory,
                        const SolverConfig& cfg, std::mt19937_64& rng,
                        const std::vector<StateIndex>& start_pool) {
  cfg.validate();
  const std::vector<StateIndex> feasible = start_pool.empty() ? feasible_states(space)
                                                              : std::vector<StateIndex>{};
  if (start_pool.empty() && feasible.empty()) throw DomainError("no feasible state");
  return train_until(space, memory, cfg, rng, start_pool, feasible, std::nullopt);
}

std::optional<std::pair<StateIndex, Scores>> best_cached(const EvaluationMemory& memory,
                                                         double budget) {
  std::optional<std::pair<StateIndex, Scores>> best;
  for (const auto& rec : memory.snapshot()) {
    if (rec.second.cost > budget) continue;
    if (!best || ranks_above(rec, *best)) best = rec;
  }
  return best;
}

SearchResult riloco_search(const SearchSpace& space, const SolverConfig& cfg,
                           EvaluationMemory& memory) {
  cfg.validate();
  const auto t0 = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (cfg.time_budget_s > 0.0) {
    deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                        std::chrono::duration<double>(cfg.time_budget_s));
  }
  // Q-table size check before any evaluation.
  (void)QTable(state_count(space.sites, space.devices), 2 * space.sites);

  std::mt19937_64 rng(cfg.rng_seed);
  const std::vector<StateIndex> feasible = feasible_states(space);
  SearchResult out;
  if (feasible.empty()) {
    // Only a negative budget gets here; report the empty deployment.
    out.scores = evaluate_state(space, memory, 0);
    out.best = decode(0, space.sites, space.devices);
    out.wall_s = seconds_since(t0);
    return out;
  }
  double best_m = -std::numeric_limits<double>::infinity();
  int stale = 0;

  for (int r = 0; r < cfg.restart_count; ++r) {
    if (deadline && Clock::now() >= *deadline) break;
    std::vector<StateIndex> pool;
    if (r > 0) {
      auto ranked = memory.snapshot();
      ranked.erase(std::remove_if(ranked.begin(), ranked.end(),
                                  [&](const auto& e) { return e.second.cost > space.budget; }),
                   ranked.end());
      std::sort(ranked.begin(), ranked.end(), ranks_above);
      const size_t keep = std::max<size_t>(
          1, static_cast<size_t>(std::ceil(cfg.refine_fraction * ranked.size())));
      for (size_t k = 0; k < std::min(keep, ranked.size()); ++k) pool.push_back(ranked[k].first);
    }
    const TrainResult tr = train_until(space, memory, cfg, rng, pool, feasible, deadline);

    RestartLog entry;
    entry.restart = r;
    entry.best = tr.best;
    entry.best_scores = tr.best_scores;
    entry.hits = memory.hits();
    entry.misses = memory.misses();
    const double total = static_cast<double>(entry.hits + entry.misses);
    entry.hit_rate = total > 0.0 ? static_cast<double>(entry.hits) / total : 0.0;
    entry.wall_s = seconds_since(t0);
    out.log.push_back(entry);

    const auto best = best_cached(memory, space.budget);
    if (best && best->second.m_s > best_m) {
      best_m = best->second.m_s;
      stale = 0;
    } else if (++stale >= cfg.no_improvement_restarts && cfg.no_improvement_restarts > 0) {
      break;
    }
  }

  if (const auto best = best_cached(memory, space.budget)) {
    out.best_state = best->first;
    out.scores = best->second;
  } else {
    out.best_state = 0;
    out.scores = evaluate_state(space, memory, 0);
  }
  out.best = decode(out.best_state, space.sites, space.devices);
  out.wall_s = seconds_since(t0);
  return out;
}

SearchResult riloco_search(const SearchSpace& space, const SolverConfig& cfg) {
  EvaluationMemory memory;
  return riloco_search(space, cfg, memory);
}

std::vector<BudgetRecord> budget_sweep(const EvaluationMemory& memory, const SearchSpace& space,
                                       const std::vector<double>& budgets) {
  std::vector<BudgetRecord> out;
  for (double b : budgets) {
    BudgetRecord rec;
    rec.budget = b;
    if (const auto best = best_cached(memory, b)) {
      rec.found = true;
      rec.state = best->first;
      rec.scores = best->second;
      rec.deployment = decode(rec.state, space.sites, space.devices);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_run_log(std::ostream& out, const SearchResult& result, int sites, int devices) {
  const auto old_precision = out.precision(17);
  for (const RestartLog& e : result.log) {
    out << "restart: " << e.restart << '\n'
        << "  best_state: " << e.best << '\n'
        << "  best_deployment: " << format_deployment(decode(e.best, sites, devices)) << '\n'
        << "  m_s: " << e.best_scores.m_s << '\n'
        << "  c_s: " << e.best_scores.c_s << '\n'
        << "  l_s: " << e.best_scores.l_s << '\n'
        << "  cost: " << e.best_scores.cost << '\n'
        << "  cache_hits: " << e.hits << '\n'
        << "  cache_misses: " << e.misses << '\n'
        << "  hit_rate: " << e.hit_rate << '\n'
        << "  wall_clock_s: " << e.wall_s << '\n';
  }
  out.precision(old_precision);
}

}  // namespace risplan
