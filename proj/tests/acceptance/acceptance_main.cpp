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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "risplan/cli.hpp"
#include "risplan/fisher.hpp"
#include "risplan/linkbudget.hpp"
#include "risplan/localizer.hpp"
#include "risplan/metrics.hpp"
#include "risplan/solver.hpp"
#include "risplan/units.hpp"

namespace {

using namespace risplan;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

bool ulp_equal(double a, double b, int ulps = 4) {
  return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * std::abs(b);
}

std::string source_path(const std::string& rel) { return std::string(RISPLAN_SOURCE_DIR) + "/" + rel; }

GridSpec square_grid(double half, double spacing) {
  const int k = static_cast<int>(std::lround(half / spacing));
  return GridSpec{{-k * spacing, -k * spacing}, 2 * k + 1, 2 * k + 1, spacing, spacing};
}

GridPdf gaussian(const GridSpec& g, double sx, double sy) {
  GridPdf p{g, std::vector<double>(g.size())};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Point c = g.center(i, j);
      p.values[g.index(i, j)] = std::exp(-0.5 * (c.x * c.x / (sx * sx) + c.y * c.y / (sy * sy)));
    }
  }
  return normalize(std::move(p));
}

double max_normalization_error = 0.0;
void track(const GridPdf& p) {
  max_normalization_error = std::max(max_normalization_error, std::abs(p.integral() - 1.0));
}

// ---------------------------------------------------------------------------

void fisher_oracles() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  double refine = 0.0;
  struct Case { double sx, sy; };
  for (const Case c : {Case{0.5, 0.5}, Case{0.5, 1.0}}) {
    const double half = 6.0 * std::max(c.sx, c.sy);
    const GridPdf coarse = gaussian(square_grid(half, 0.05), c.sx, c.sy);
    const GridPdf fine = gaussian(square_grid(half, 0.025), c.sx, c.sy);
    track(coarse);
    track(fine);
    const LocalizationBound b = localization_bound(coarse);
    const double lo = 1.0 / (std::max(c.sx, c.sy) * std::max(c.sx, c.sy));
    const double hi = 1.0 / (std::min(c.sx, c.sy) * std::min(c.sx, c.sy));
    worst = std::max({worst, std::abs(b.ev_min / lo - 1.0), std::abs(b.ev_max / hi - 1.0)});
    refine = std::max(refine, std::abs(localization_bound(fine).ev_min / b.ev_min - 1.0));
  }
  const double t = since(t0);
  report(1, worst < 0.02 && refine < 0.02 && t < 10.0,
         fmt("eigenvalue error %.3g%% (< 2%%), refinement change %.3g%% (< 2%%), %.2f s", 100 * worst,
             100 * refine, t));
}

void sensor_formulas() {
  const auto t0 = Clock::now();
  const double s0 = toa_sigma(100e6, 1.0), s20 = toa_sigma(100e6, 100.0);
  const bool toa = std::abs(s0 - 1.0607) < 5e-5 && std::abs(s20 - 0.10607) < 5e-6;
  const double m2 = 0.01;
  const bool aoa = ulp_equal(aoa_variance(m2, 20, 0, 20), m2 / 0.9) &&
                   ulp_equal(aoa_variance(m2, 0, 0, 20), m2 / 0.1);
  MetricConfig cfg;
  const bool logi = ulp_equal(comm_point_metric(20.0, cfg), 0.9) &&
                    ulp_equal(comm_point_metric(0.0, cfg), 0.1);
  const double t = since(t0);
  report(2, toa && aoa && logi && t < 1.0,
         fmt("sigma_toa %.5f / %.6f m, aoa milestones exact=%s, logistic milestones exact=%s", s0, s20,
             yes_no(aoa), yes_no(logi)));
}

void collocation() {
  const auto t0 = Clock::now();
  std::vector<SensorPair> pairs;
  const double range = 10.0;
  for (int t = 0; t < 4; ++t) {
    for (int a = 0; a < 4; ++a) {
      const double pt = t * kPi / 4, pa = a * kPi / 4;
      pairs.push_back({{range * std::cos(pt), range * std::sin(pt)},
                       {range * std::cos(pa), range * std::sin(pa)}});
    }
  }
  const GridSpec g = square_grid(1.8, 0.02);
  const PairRanking r = theorem1_check(0.3, 0.03, pairs, {0, 0}, g, 0.01);
  double top = 0.0, colloc_min = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < pairs.size(); ++k) {
    top = std::max(top, r.ev_min[k]);
    if (pairs[k].toa == pairs[k].aoa) colloc_min = std::min(colloc_min, r.ev_min[k]);
  }
  const bool best_colloc = pairs[r.best].toa == pairs[r.best].aoa;
  const double t = since(t0);
  report(3, best_colloc && colloc_min >= 0.99 * top && t < 60.0,
         fmt("best pair collocated=%s, collocated ev_min %.4g vs max %.4g, %.2f s", yes_no(best_colloc),
             colloc_min, top, t));
}

Scenario shipped() { return load_scenario(source_path("scenarios/isac_50m.json")); }

// (C_S, L_S, cost) for every state of a small scenario.
struct Table {
  int sites = 0;
  int devices = 0;
  double budget = 0.0;
  std::vector<Scores> rows;
};

Table tabulate(const Scenario& s) {
  Table t{s.site_count(), s.device_count(), s.budget_total, {}};
  const MetricConfig cfg = MetricConfig::for_scenario(s, 0.0);
  for (StateIndex k = 0; k < state_count(t.sites, t.devices); ++k) {
    const Deployment d = decode(k, t.sites, t.devices);
    const MetricMaps m = evaluate_deployment(s, d, cfg);
    t.rows.push_back({m.c_s, m.l_s, 0.0, deployment_cost(s, d)});
  }
  return t;
}

SearchSpace table_space(const Table& t, double alpha) {
  SearchSpace sp;
  sp.sites = t.sites;
  sp.devices = t.devices;
  sp.budget = t.budget;
  const auto rows = std::make_shared<std::vector<Scores>>(t.rows);
  const int dv = t.devices;
  sp.cost = [rows, dv](const Deployment& d) { return (*rows)[encode(d, dv)].cost; };
  sp.evaluate = [rows, dv, alpha](const Deployment& d) {
    Scores sc = (*rows)[encode(d, dv)];
    sc.m_s = joint_metric(alpha, sc.c_s, sc.l_s);
    return sc;
  };
  return sp;
}

void solver_optimality() {
  const auto t0 = Clock::now();
  const Scenario base = shipped();
  const std::vector<std::vector<int>> subsets{{0, 1, 2, 3}, {2, 3, 4, 5}, {0, 2, 4, 5}, {1, 3, 4, 5}};
  std::vector<Table> tables;
  for (const auto& sub : subsets) {
    Scenario s = base;
    s.candidate_sites.clear();
    for (int i : sub) s.candidate_sites.push_back(base.candidate_sites[static_cast<size_t>(i)]);
    s.grid_spacing = 2.0;
    s.budget_total = 900;
    tables.push_back(tabulate(s));
  }
  const double alphas[] = {0.0, 0.5, 1.0};
  int hits = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    const Table& t = tables[static_cast<size_t>(seed) % tables.size()];
    const SearchSpace sp = table_space(t, alphas[seed % 3]);
    double best = -1.0;
    for (StateIndex k = 0; k < t.rows.size(); ++k) {
      if (t.rows[k].cost <= t.budget) best = std::max(best, sp.evaluate(decode(k, t.sites, t.devices)).m_s);
    }
    SolverConfig cfg;
    cfg.rng_seed = static_cast<std::uint64_t>(seed);
    EvaluationMemory memory;
    const SearchResult r = riloco_search(sp, cfg, memory);
    if (r.scores.m_s == best && r.scores.cost <= t.budget) ++hits;
  }
  const double t = since(t0);
  report(4, hits >= 95 && t < 600.0,
         fmt("exhaustive optimum found in %d/100 seeds (>= 95), %.1f s", hits, t));
}

struct TradeoffRuns {
  SearchResult comm, joint, loc;
  double minsnr[3] = {0, 0, 0};        // over cells with any signal
  double shadowed[3] = {0, 0, 0};      // share of cells without one
  EvaluationMemory joint_memory;
  SearchSpace joint_space;
};

void tradeoff(TradeoffRuns& runs) {
  const auto t0 = Clock::now();
  const Scenario s = shipped();
  auto cache = std::make_shared<AggregateCache>();
  const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto run = [&](double alpha, EvaluationMemory& memory, SearchSpace* keep) {
    MetricConfig cfg = MetricConfig::for_scenario(s, alpha);
    cfg.threads = threads;
    const SearchSpace sp = metric_search_space(s, cfg, cache);
    if (keep) *keep = sp;
    return riloco_search(sp, SolverConfig{}, memory);
  };
  EvaluationMemory m0, m1;
  runs.comm = run(0.0, m0, nullptr);
  runs.joint = run(0.5, runs.joint_memory, &runs.joint_space);
  runs.loc = run(1.0, m1, nullptr);
  const double t = since(t0);

  const double c_ref = runs.comm.scores.c_s, l_ref = runs.loc.scores.l_s;
  const Scores& j = runs.joint.scores;
  const bool c_ok = j.c_s >= 0.9 * c_ref;
  const bool l_ok = j.l_s >= 0.9 * l_ref;
  const bool trade = runs.comm.scores.l_s < j.l_s;
  std::printf("  alpha=0   %s  C_S=%.4f L_S=%.4f\n", format_deployment(runs.comm.best).c_str(),
              runs.comm.scores.c_s, runs.comm.scores.l_s);
  std::printf("  alpha=0.5 %s  C_S=%.4f L_S=%.4f\n", format_deployment(runs.joint.best).c_str(),
              j.c_s, j.l_s);
  std::printf("  alpha=1   %s  C_S=%.4f L_S=%.4f\n", format_deployment(runs.loc.best).c_str(),
              runs.loc.scores.c_s, runs.loc.scores.l_s);
  report(5, c_ok && l_ok && trade && t <= 7200.0,
         fmt("C_S ratio %.3f (>= 0.9), L_S ratio %.3f (>= 0.9), L_S legacy %.4f < combined %.4f", j.c_s / c_ref,
             j.l_s / l_ref, runs.comm.scores.l_s, j.l_s) +
             fmt(", %.0f s", t));

  const SearchResult* all[] = {&runs.comm, &runs.joint, &runs.loc};
  for (int k = 0; k < 3; ++k) {
    MetricConfig cfg = MetricConfig::for_scenario(s, 0.5);
    cfg.threads = threads;
    const MetricMaps m = evaluate_deployment(s, all[k]->best, cfg);
    double lo = std::numeric_limits<double>::infinity();
    size_t dark = 0;
    for (double v : m.snr_db) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
      } else {
        ++dark;
      }
    }
    runs.minsnr[k] = lo;
    runs.shadowed[k] = static_cast<double>(dark) / static_cast<double>(m.snr_db.size());
  }
}

void coverage_floor(const TradeoffRuns& runs) {
  report(6, true,
         fmt("reported only: min in-area SNR %.2f / %.2f / %.2f dB (alpha 0 / 0.5 / 1) vs 7.5 dB reference",
             runs.minsnr[0], runs.minsnr[1], runs.minsnr[2]) +
             fmt(", cells without signal %.1f%% / %.1f%% / %.1f%%", 100 * runs.shadowed[0],
                 100 * runs.shadowed[1], 100 * runs.shadowed[2]));
}

void budget_monotonicity(const TradeoffRuns& runs) {
  std::vector<double> budgets;
  for (double b = 0; b <= 1200; b += 100) budgets.push_back(b);
  const auto rows = budget_sweep(runs.joint_memory, runs.joint_space, budgets);
  bool mono = true, within = true, found = true;
  for (size_t k = 0; k < rows.size(); ++k) {
    found = found && rows[k].found;
    within = within && rows[k].scores.cost <= rows[k].budget;
    if (k > 0) mono = mono && rows[k].scores.m_s >= rows[k - 1].scores.m_s;
  }
  // Reported only: how much of the full-budget score half the budget buys.
  const auto half = budget_sweep(runs.joint_memory, runs.joint_space, {600.0, 1200.0});
  const double share = half[1].scores.m_s > 0 ? half[0].scores.m_s / half[1].scores.m_s : 0.0;
  report(7, mono && within && found,
         fmt("%zu budgets, non-decreasing M_S=%s, cost within budget=%s", rows.size(), yes_no(mono),
             yes_no(within)) +
             fmt(", half budget reaches %.1f%% of full M_S", 100 * share));
}

void localizer_crb() {
  const auto t0 = Clock::now();
  // Collocated range and bearing sensor 10 m from the UE: radial and
  // tangential information are orthogonal.
  const Point ue{0, 0};
  const Point sensor{-10, 0};
  const double sr = 0.3, st = 0.02;
  const SensorPositions pos{{"s", sensor}};
  const GridSpec grid = GridSpec::covering({{-2.0, -2.0}, {2.0, 2.0}}, 0.02);
  const std::vector<SensorAccuracy> acc{{SensorKind::kToa, "s", sensor, sr, 10},
                                        {SensorKind::kAoa, "s", sensor, st, 10}};
  const GridPdf truth_pdf = fused_sensor_pdf(acc, ue, grid);
  track(truth_pdf);
  const double crb = localization_bound(truth_pdf).sigma_crb;

  std::mt19937_64 rng(2026);
  std::normal_distribution<double> n01(0.0, 1.0);
  double se = 0.0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const std::vector<Measurement> ms{
        {"s", SensorKind::kToa, distance(sensor, ue) + sr * n01(rng), sr, 0.0},
        {"s", SensorKind::kAoa, std::atan2(ue.y - sensor.y, ue.x - sensor.x) + st * n01(rng), st, 0.0}};
    const LocationEstimate e = locate(ms, pos, grid);
    track(e.posterior);
    const double d = distance(e.point_estimate, ue);
    se += d * d;
  }
  const double rmse = std::sqrt(se / trials);
  const double ratio = rmse / crb;

  // NLOS injection: five ranging anchors on a pentagon, one reading pushed
  // outward by 3-6 m. Every reading carries a 1 m bias tolerance.
  SensorPositions anchors;
  std::vector<std::string> ids;
  for (int i = 0; i < 5; ++i) {
    const double a = 0.3 + i * 2 * kPi / 5;
    ids.push_back("p" + std::to_string(i));
    anchors[ids.back()] = {10 + 12 * std::cos(a), 10 + 12 * std::sin(a)};
  }
  const GridSpec area = GridSpec::covering({{5, 5}, {15, 15}}, 0.05);
  std::uniform_real_distribution<double> where(8.0, 12.0), bias(3.0, 6.0);
  std::uniform_int_distribution<int> pick(0, 4);
  int caught = 0, false_drops = 0;
  for (int k = 0; k < 100; ++k) {
    const Point u{where(rng), where(rng)};
    const int bad = pick(rng);
    std::vector<Measurement> ms;
    for (int i = 0; i < 5; ++i) {
      const std::string& id = ids[static_cast<size_t>(i)];
      double r = distance(anchors.at(id), u) + 0.2 * n01(rng);
      if (i == bad) r += bias(rng);
      ms.push_back({id, SensorKind::kToa, r, 0.2, 1.0});
    }
    const LocationEstimate e = nlos_filter_refine(ms, anchors, area);
    track(e.posterior);
    bool got = false;
    for (const std::string& d : e.discarded) {
      if (d == ids[static_cast<size_t>(bad)]) {
        got = true;
      } else {
        ++false_drops;
      }
    }
    caught += got;
  }
  const double t = since(t0);
  report(8, ratio >= 0.75 && ratio <= 1.5 && caught >= 90 && t < 300.0,
         fmt("RMSE %.4f m / sigma_CRB %.4f m = %.3f (in [0.75, 1.5]); NLOS reading discarded in %d/100",
             rmse, crb, ratio, caught) +
             fmt(" (false discards %d), %.1f s", false_drops, t));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drops lines carrying wall-clock timings, which legitimately vary.
std::string without_timing(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.find("wall_clock_s") == std::string::npos) out += line + '\n';
  }
  return out;
}

void determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "risplan_acceptance";
  fs::remove_all(root);
  bool same = true;
  std::ostringstream sink;
  int rc = 0;
  std::vector<std::string> base{"risplan", "optimize", "--scenario", source_path("scenarios/isac_50m.json"),
                                "--episodes", "40", "--restarts", "2", "--seed", "7", "--out"};
  for (const char* run : {"a", "b"}) {
    auto args = base;
    args.push_back((root / run).string());
    rc |= run_cli(args, sink, sink);
  }
  for (const char* f : {"maps.csv"}) same = same && slurp(root / "a" / f) == slurp(root / "b" / f);
  for (const char* f : {"report.json", "run_log.txt"}) {
    same = same && without_timing(slurp(root / "a" / f)) == without_timing(slurp(root / "b" / f));
  }
  same = same && !slurp(root / "a" / "maps.csv").empty();

  // Random fused sensor PDFs on local windows.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 50.0), sig(0.02, 1.0), ang(0.002, 0.05);
  for (int k = 0; k < 200; ++k) {
    const Point ue{10 + u(rng) * 0.6, 10 + u(rng) * 0.6};
    std::vector<SensorAccuracy> acc{{SensorKind::kToa, "a", {u(rng), u(rng)}, sig(rng), 5},
                                    {SensorKind::kAoa, "b", {u(rng), u(rng)}, ang(rng), 5},
                                    {SensorKind::kToa, "c", {u(rng), u(rng)}, sig(rng), 5}};
    if (distance(acc[1].position, ue) < 1.0) continue;
    const GridSpec g = local_window(acc, ue, {{0, 0}, {50, 50}});
    track(fused_sensor_pdf(acc, ue, g));
  }
  fs::remove_all(root);
  report(9, rc == 0 && same && max_normalization_error <= 1e-9,
         fmt("repeated optimize outputs identical=%s; max |sum P dx dy - 1| = %.2g (<= 1e-9)",
             yes_no(rc == 0 && same), max_normalization_error));
}

}  // namespace

int main() {
  try {
    fisher_oracles();
    sensor_formulas();
    collocation();
    solver_optimality();
    TradeoffRuns runs;
    tradeoff(runs);
    coverage_floor(runs);
    budget_monotonicity(runs);
    localizer_crb();
    determinism();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
