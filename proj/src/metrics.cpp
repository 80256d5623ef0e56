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

#include "risplan/metrics.hpp"

#include <algorithm>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "risplan/error.hpp"
#include "risplan/fisher.hpp"
#include "risplan/linkbudget.hpp"

namespace risplan {

void MetricConfig::validate() const {
  if (!(balance_alpha >= 0.0 && balance_alpha <= 1.0)) {
    throw ValidationError("alpha", "must lie in [0, 1]");
  }
  if (!(k_crb > 0.0)) throw ValidationError("k_crb", "must be > 0");
  if (!(sigma_th > 0.0)) throw ValidationError("sigma_th", "must be > 0");
  if (!(snr_max_db > snr_min_db)) throw ValidationError("snr_max_db", "must exceed snr_min_db");
  if (threads < 1) throw ValidationError("threads", "must be >= 1");
}

MetricConfig MetricConfig::for_scenario(const Scenario& s, double alpha) {
  MetricConfig cfg;
  cfg.balance_alpha = alpha;
  cfg.snr_min_db = s.rf.snr_min_db;
  cfg.snr_max_db = s.rf.snr_max_db;
  return cfg;
}

double logistic(double x, double k, double x0) {
  const double t = k * (x - x0);
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double comm_point_metric(double snr_db, const MetricConfig& cfg) {
  if (snr_db == kNoSignalDb) return 0.0;
  return logistic(snr_db, cfg.k_snr(), cfg.snr_c());
}

double loc_point_metric(double sigma_crb, const MetricConfig& cfg) {
  // 1 - logistic(x) == logistic(-x) without cancellation.
  return logistic(-sigma_crb, cfg.k_crb, -cfg.sigma_th);
}

PointEvaluation evaluate_point(const Scenario& s, const Deployment& d, Point p,
                               const MetricConfig& cfg) {
  PointEvaluation out;
  out.snr_db = snr_at_point(s, d, p).snr_db;
  const std::vector<SensorAccuracy> sensors = sensors_at_point(s, d, p);
  out.sensor_count = static_cast<int>(sensors.size());
  if (sensors.empty()) {
    out.sigma_crb = 1.0 / std::sqrt(kInformationFloor);
    return out;
  }
  const GridSpec window = local_window(sensors, p, s.area_bounds, cfg.window);
  out.sigma_crb = localization_bound(fused_sensor_pdf(sensors, p, window)).sigma_crb;
  return out;
}

MetricMaps evaluate_deployment(const Scenario& s, const Deployment& d, const MetricConfig& cfg) {
  cfg.validate();
  validate_deployment(s, d);
  MetricMaps m;
  m.alpha = cfg.balance_alpha;
  m.grid = ue_grid(s);
  const size_t n = m.grid.size();
  m.snr_db.assign(n, 0.0);
  m.sigma_crb_m.assign(n, 0.0);
  m.c_value.assign(n, 0.0);
  m.l_value.assign(n, 0.0);
  m.m_value.assign(n, 0.0);

  auto rows = [&](int j_begin, int j_step) {
    for (int j = j_begin; j < m.grid.ny; j += j_step) {
      for (int i = 0; i < m.grid.nx; ++i) {
        const size_t c = m.grid.index(i, j);
        const PointEvaluation e = evaluate_point(s, d, m.grid.center(i, j), cfg);
        m.snr_db[c] = e.snr_db;
        m.sigma_crb_m[c] = e.sigma_crb;
        m.c_value[c] = comm_point_metric(e.snr_db, cfg);
        m.l_value[c] = loc_point_metric(e.sigma_crb, cfg);
        m.m_value[c] = joint_metric(cfg.balance_alpha, m.c_value[c], m.l_value[c]);
      }
    }
  };
  const int workers = std::min(cfg.threads, m.grid.ny);
  if (workers <= 1) {
    rows(0, 1);
  } else {
    // Interleaved rows; each cell is written by exactly one worker, and the
    // sums below run serially, so results do not depend on thread count.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          rows(w, workers);
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  double sc = 0.0, sl = 0.0;
  for (size_t c = 0; c < n; ++c) {
    sc += m.c_value[c];
    sl += m.l_value[c];
  }
  m.c_s = sc / static_cast<double>(n);
  m.l_s = sl / static_cast<double>(n);
  m.m_s = joint_metric(cfg.balance_alpha, m.c_s, m.l_s);
  return m;
}

void write_metric_csv(std::ostream& out, const MetricMaps& maps) {
  const auto old_precision = out.precision(17);
  out << "x,y,snr_db,sigma_crb_m,c,l,m\n";
  for (int j = 0; j < maps.grid.ny; ++j) {
    for (int i = 0; i < maps.grid.nx; ++i) {
      const size_t c = maps.grid.index(i, j);
      const Point p = maps.grid.center(i, j);
      out << p.x << ',' << p.y << ',' << maps.snr_db[c] << ',' << maps.sigma_crb_m[c] << ','
          << maps.c_value[c] << ',' << maps.l_value[c] << ',' << maps.m_value[c] << '\n';
    }
  }
  out.precision(old_precision);
}

Aggregates aggregate_metric_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("metric CSV: missing header");
  double sc = 0.0, sl = 0.0, sm = 0.0;
  size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) cols.push_back(tok);
    if (cols.size() != 7) throw DomainError("metric CSV: expected 7 columns");
    sc += std::stod(cols[4]);
    sl += std::stod(cols[5]);
    sm += std::stod(cols[6]);
    ++rows;
  }
  if (rows == 0) throw DomainError("metric CSV: no rows");
  const double n = static_cast<double>(rows);
  return {sc / n, sl / n, sm / n};
}

}  // namespace risplan
