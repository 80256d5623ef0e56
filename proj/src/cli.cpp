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

#include "risplan/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "risplan/error.hpp"
#include "risplan/linkbudget.hpp"
#include "risplan/localizer.hpp"
#include "risplan/metrics.hpp"
#include "risplan/solver.hpp"

namespace risplan {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Options {
  std::string scenario;
  std::string deployment;
  std::string out = "out";
  std::string measurements;
  std::string budgets = "0,300,600,900,1200";
  std::string window;
  double alpha = 0.5;
  double time_budget_s = 0.0;
  double overlap_threshold = 0.1;
  double spacing = 0.05;
  double budget = -1.0;
  std::uint64_t seed = 1;
  int threads = 1;
  int restarts = SolverConfig{}.restart_count;
  int episodes = SolverConfig{}.episodes;
  int steps = SolverConfig{}.steps_per_episode;
  int no_improvement = 0;
  bool heatmaps = false;
  bool no_filter = false;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(what, "malformed number '" + tok + "'");
    }
  }
  if (out.empty()) throw ValidationError(what, "empty list");
  return out;
}

// 8-bit binary PGM, row 0 at the top (largest y).
void write_pgm(const fs::path& p, const UeGrid& g, const std::vector<double>& v, double lo,
               double hi) {
  std::ofstream f = open_out(p);
  f << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      double x = v[g.index(i, j)];
      if (!std::isfinite(x)) x = x > 0 ? hi : lo;
      const double t = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
      f.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  }
}

void write_maps(const fs::path& dir, const MetricMaps& m, const Scenario& s, bool heatmaps) {
  {
    std::ofstream f = open_out(dir / "maps.csv");
    write_metric_csv(f, m);
  }
  if (!heatmaps) return;
  write_pgm(dir / "snr_db.pgm", m.grid, m.snr_db, s.rf.snr_min_db - 10.0, s.rf.snr_max_db + 10.0);
  std::vector<double> log_sigma;
  for (double v : m.sigma_crb_m) log_sigma.push_back(-std::log10(v));
  write_pgm(dir / "sigma_crb.pgm", m.grid, log_sigma, -1.0, 2.0);
  write_pgm(dir / "c.pgm", m.grid, m.c_value, 0.0, 1.0);
  write_pgm(dir / "l.pgm", m.grid, m.l_value, 0.0, 1.0);
  write_pgm(dir / "m.pgm", m.grid, m.m_value, 0.0, 1.0);
}

ordered_json scores_json(const Scores& sc) {
  return {{"c_s", sc.c_s}, {"l_s", sc.l_s}, {"m_s", sc.m_s}, {"cost", sc.cost}};
}

double min_snr(const MetricMaps& m) {
  return *std::min_element(m.snr_db.begin(), m.snr_db.end());
}

void write_report(const fs::path& dir, const ordered_json& report) {
  std::ofstream f = open_out(dir / "report.json");
  f << report.dump(2) << '\n';
}

MetricConfig metric_config(const Scenario& s, const Options& o) {
  MetricConfig cfg = MetricConfig::for_scenario(s, o.alpha);
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.rng_seed = o.seed;
  cfg.time_budget_s = o.time_budget_s;
  cfg.restart_count = o.restarts;
  cfg.episodes = o.episodes;
  cfg.steps_per_episode = o.steps;
  cfg.no_improvement_restarts = o.no_improvement;
  cfg.validate();
  return cfg;
}

ordered_json solver_json(const SolverConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"discount_factor", c.discount_factor},
          {"episodes", c.episodes},
          {"steps_per_episode", c.steps_per_episode},
          {"restart_count", c.restart_count},
          {"time_budget_s", c.time_budget_s},
          {"no_improvement_restarts", c.no_improvement_restarts},
          {"refine_fraction", c.refine_fraction}};
}

ordered_json metric_json(const MetricConfig& c) {
  return {{"alpha", c.balance_alpha},   {"sigma_th_m", c.sigma_th},
          {"k_crb", c.k_crb},           {"snr_min_db", c.snr_min_db},
          {"snr_max_db", c.snr_max_db}, {"window_fine_spacing_m", c.window.fine_spacing},
          {"threads", c.threads}};
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  out << "ok " << o.scenario << " digest=" << scenario_digest(s) << " sites=" << s.site_count()
      << " devices=" << s.device_count() << " states="
      << state_count(s.site_count(), s.device_count()) << '\n';
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  const Deployment d = o.deployment.empty()
                           ? Deployment{std::vector<int>(static_cast<size_t>(s.site_count()), 0)}
                           : parse_deployment(o.deployment);
  validate_deployment(s, d);
  const MetricConfig cfg = metric_config(s, o);
  const auto t0 = std::chrono::steady_clock::now();
  const MetricMaps m = evaluate_deployment(s, d, cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir = prepare_dir(o.out);
  write_maps(dir, m, s, o.heatmaps);
  ordered_json report;
  report["command"] = "evaluate";
  report["scenario_digest"] = scenario_digest(s);
  report["config"] = metric_json(cfg);
  report["deployment"] = format_deployment(d);
  report["c_s"] = m.c_s;
  report["l_s"] = m.l_s;
  report["m_s"] = m.m_s;
  report["cost"] = deployment_cost(s, d);
  report["min_snr_db"] = min_snr(m);
  report["wall_clock_s"] = wall;
  write_report(dir, report);
  out << std::setprecision(6) << "deployment " << format_deployment(d) << "  C_S=" << m.c_s
      << "  L_S=" << m.l_s << "  M_S=" << m.m_s << "  cost=" << deployment_cost(s, d) << '\n';
  return kExitOk;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  const MetricConfig mcfg = metric_config(s, o);
  const SolverConfig scfg = solver_config(o);
  const std::optional<double> budget =
      o.budget >= 0.0 ? std::optional<double>(o.budget) : std::nullopt;
  const SearchSpace space = metric_search_space(s, mcfg, nullptr, budget);
  EvaluationMemory memory;
  const SearchResult r = riloco_search(space, scfg, memory);
  const MetricMaps maps = evaluate_deployment(s, r.best, mcfg);

  const fs::path dir = prepare_dir(o.out);
  write_maps(dir, maps, s, o.heatmaps);
  {
    std::ofstream f = open_out(dir / "run_log.txt");
    write_run_log(f, r, space.sites, space.devices);
  }
  std::string label = "combined";
  if (o.alpha == 0.0) label = "communications-focused (legacy)";
  if (o.alpha == 1.0) label = "localization-focused";

  ordered_json report;
  report["command"] = "optimize";
  report["label"] = label;
  report["scenario_digest"] = scenario_digest(s);
  report["seed"] = o.seed;
  report["budget"] = space.budget;
  report["metric_config"] = metric_json(mcfg);
  report["solver_config"] = solver_json(scfg);
  report["best_deployment"] = format_deployment(r.best);
  report["best"] = scores_json(r.scores);
  report["min_snr_db"] = min_snr(maps);
  report["cache"] = {{"entries", memory.size()},
                     {"hits", memory.hits()},
                     {"misses", memory.misses()}};
  report["restarts_run"] = r.log.size();
  report["wall_clock_s"] = r.wall_s;
  write_report(dir, report);
  out << std::setprecision(6) << label << ": best " << format_deployment(r.best)
      << "  C_S=" << r.scores.c_s << "  L_S=" << r.scores.l_s << "  M_S=" << r.scores.m_s
      << "  cost=" << r.scores.cost << "  evaluated=" << memory.size() << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  std::vector<double> budgets = parse_list(o.budgets, "budgets");
  std::sort(budgets.begin(), budgets.end());
  const MetricConfig mcfg = metric_config(s, o);
  const SolverConfig scfg = solver_config(o);
  // One search at the largest budget fills the memory for every smaller one.
  const SearchSpace space = metric_search_space(s, mcfg, nullptr, budgets.back());
  EvaluationMemory memory;
  riloco_search(space, scfg, memory);
  const std::vector<BudgetRecord> rows = budget_sweep(memory, space, budgets);

  const fs::path dir = prepare_dir(o.out);
  std::ofstream f = open_out(dir / "sweep.csv");
  f << std::setprecision(17) << "budget,deployment,cost,c_s,l_s,m_s\n";
  out << std::setprecision(6) << std::left << std::setw(10) << "budget" << std::setw(16)
      << "deployment" << std::setw(8) << "cost" << std::setw(10) << "C_S" << std::setw(10)
      << "L_S" << "M_S\n";
  for (const BudgetRecord& b : rows) {
    const std::string dep = b.found ? format_deployment(b.deployment) : "-";
    f << b.budget << ',' << dep << ',' << b.scores.cost << ',' << b.scores.c_s << ','
      << b.scores.l_s << ',' << b.scores.m_s << '\n';
    out << std::setw(10) << b.budget << std::setw(16) << dep << std::setw(8) << b.scores.cost
        << std::setw(10) << b.scores.c_s << std::setw(10) << b.scores.l_s << b.scores.m_s << '\n';
  }
  return kExitOk;
}

int cmd_locate(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  SensorPositions sensors;
  for (const BaseStation& bs : s.base_stations) sensors[bs.id] = bs.position;
  for (int i = 0; i < s.site_count(); ++i) {
    sensors["cs" + std::to_string(i)] = s.candidate_sites[static_cast<size_t>(i)].position;
  }
  std::ifstream in(o.measurements);
  if (!in) throw std::runtime_error("cannot open " + o.measurements);
  const std::vector<Measurement> ms = read_measurements(in);

  Rect region = s.ue_area;
  if (!o.window.empty()) {
    const std::vector<double> w = parse_list(o.window, "window");
    if (w.size() != 4) throw ValidationError("window", "expected xmin,ymin,xmax,ymax");
    region = Rect{{w[0], w[1]}, {w[2], w[3]}};
  }
  const GridSpec grid = GridSpec::covering(region, o.spacing);
  const LocationEstimate est = o.no_filter ? locate(ms, sensors, grid)
                                           : nlos_filter_refine(ms, sensors, grid,
                                                                o.overlap_threshold);
  const fs::path dir = prepare_dir(o.out);
  {
    std::ofstream f = open_out(dir / "posterior.csv");
    write_csv(f, est.posterior);
  }
  ordered_json report;
  report["command"] = "locate";
  report["scenario_digest"] = scenario_digest(s);
  report["estimate"] = {est.point_estimate.x, est.point_estimate.y};
  report["used"] = est.used;
  report["discarded"] = est.discarded;
  report["grid"] = {{"nx", grid.nx}, {"ny", grid.ny}, {"dx", grid.dx}, {"dy", grid.dy}};
  write_report(dir, report);
  out << std::setprecision(6) << "estimate " << est.point_estimate.x << ' '
      << est.point_estimate.y << "  used=" << est.used.size()
      << "  discarded=" << est.discarded.size() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"RIS placement planning for joint coverage and localization"};
  app.require_subcommand(1);

  auto scenario_opt = [&](CLI::App* c) {
    c->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  };
  auto out_opt = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory"); };
  auto metric_opts = [&](CLI::App* c) {
    c->add_option("--alpha", o.alpha, "Localization weight in [0, 1]");
    c->add_option("--threads", o.threads, "Worker threads for metric maps");
    c->add_flag("--heatmaps", o.heatmaps, "Also write PGM heatmaps");
  };
  auto solver_opts = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed");
    c->add_option("--time-budget-s", o.time_budget_s, "Wall-clock limit, 0 = none");
    c->add_option("--restarts", o.restarts, "Agent restarts");
    c->add_option("--episodes", o.episodes, "Episodes per restart");
    c->add_option("--steps", o.steps, "Steps per episode");
    c->add_option("--stop-after-stale", o.no_improvement,
                  "Stop after this many restarts without improvement, 0 = off");
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  scenario_opt(validate);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Metric maps of one deployment");
  scenario_opt(evaluate);
  out_opt(evaluate);
  metric_opts(evaluate);
  evaluate->add_option("--deployment", o.deployment, "Device per site, e.g. 0,1,2,0,0,0");

  CLI::App* optimize = app.add_subcommand("optimize", "Search for the best deployment");
  scenario_opt(optimize);
  out_opt(optimize);
  metric_opts(optimize);
  solver_opts(optimize);
  optimize->add_option("--budget", o.budget, "Budget override");

  CLI::App* sweep = app.add_subcommand("sweep-budget", "Best deployment per budget");
  scenario_opt(sweep);
  out_opt(sweep);
  metric_opts(sweep);
  solver_opts(sweep);
  sweep->add_option("--budgets", o.budgets, "Comma-separated budgets");

  CLI::App* loc = app.add_subcommand("locate", "Estimate a position from measurements");
  scenario_opt(loc);
  out_opt(loc);
  loc->add_option("--measurements", o.measurements, "CSV sensor_id,kind,value,sigma[,nlos_bias]")
      ->required();
  loc->add_option("--window", o.window, "xmin,ymin,xmax,ymax (default: UE area)");
  loc->add_option("--spacing", o.spacing, "Grid spacing in m");
  loc->add_option("--overlap-threshold", o.overlap_threshold, "Discard factor of median overlap");
  loc->add_flag("--no-filter", o.no_filter, "Skip NLOS rejection");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(o, out);
    if (*evaluate) return cmd_evaluate(o, out);
    if (*optimize) return cmd_optimize(o, out);
    if (*sweep) return cmd_sweep(o, out);
    if (*loc) return cmd_locate(o, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace risplan
