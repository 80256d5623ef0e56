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

// Communication, localization and joint quality of a deployment.

#ifndef RISPLAN_METRICS_HPP
#define RISPLAN_METRICS_HPP

#include <cmath>
#include <iosfwd>
#include <vector>

#include "risplan/pdfgrid.hpp"
#include "risplan/scenario.hpp"

namespace risplan {

struct MetricConfig {
  double balance_alpha = 0.5;             // weight of localization
  double sigma_th = 1.0;                  // m
  double k_crb = 10.0 * std::log(9.0);    // m^-1
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
  WindowPolicy window;
  int threads = 1;

  // Throws ValidationError on out-of-range fields.
  void validate() const;
  double k_snr() const { return 2.0 * std::log(9.0) / (snr_max_db - snr_min_db); }
  double snr_c() const { return 0.5 * (snr_max_db + snr_min_db); }

  // Defaults with the SNR thresholds taken from the scenario.
  static MetricConfig for_scenario(const Scenario& s, double alpha = 0.5);
};

// e^{k(x-x0)} / (1 + e^{k(x-x0)}), evaluated without overflow.
double logistic(double x, double k, double x0);

// kNoSignalDb maps to 0.
double comm_point_metric(double snr_db, const MetricConfig& cfg);

// 1 - logistic(sigma_crb, k_crb, sigma_th).
double loc_point_metric(double sigma_crb, const MetricConfig& cfg);

struct PointEvaluation {
  double snr_db = kNoSignalDb;
  double sigma_crb = 0.0;
  int sensor_count = 0;
};

// SNR and localization bound of a single UE position.
PointEvaluation evaluate_point(const Scenario& s, const Deployment& d, Point p,
                               const MetricConfig& cfg);

struct MetricMaps {
  UeGrid grid;
  std::vector<double> snr_db;
  std::vector<double> sigma_crb_m;
  std::vector<double> c_value;
  std::vector<double> l_value;
  std::vector<double> m_value;
  double c_s = 0.0;
  double l_s = 0.0;
  double m_s = 0.0;
  double alpha = 0.5;
};

// Joint score alpha * l + (1 - alpha) * c.
inline double joint_metric(double alpha, double c, double l) {
  return alpha * l + (1.0 - alpha) * c;
}

MetricMaps evaluate_deployment(const Scenario& s, const Deployment& d, const MetricConfig& cfg);

// Rows "x,y,snr_db,sigma_crb_m,c,l,m".
void write_metric_csv(std::ostream& out, const MetricMaps& maps);

// Re-aggregates a CSV produced by write_metric_csv into (C_S, L_S, M_S).
struct Aggregates {
  double c_s = 0.0;
  double l_s = 0.0;
  double m_s = 0.0;
};
Aggregates aggregate_metric_csv(std::istream& in);

}  // namespace risplan

#endif  // RISPLAN_METRICS_HPP
