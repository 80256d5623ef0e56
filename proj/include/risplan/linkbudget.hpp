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

// Scalar radio models: free-space link budget, RIS array pattern and
// beamwidth, ranging and bearing accuracy, and per-point SNR.
//
// All powers crossing this interface are in dBm and all gains are linear.

#ifndef RISPLAN_LINKBUDGET_HPP
#define RISPLAN_LINKBUDGET_HPP

#include <string>
#include <vector>

#include "risplan/scenario.hpp"
#include "risplan/units.hpp"

namespace risplan {

// P_r = P_t * G_t * G_r * lambda^2 / (4 pi d)^gamma, in dBm.
// Throws DomainError for distance <= 0.
double friis_rx_power(double p_t_dbm, double g_t, double g_r, double wavelength, double distance,
                      double gamma);

// Azimuth gain of a RIS modelled as a uniform linear array of `elements_h`
// elements (pitch `element_spacing` wavelengths) steered to `steer_angle`.
// Angles are relative to the surface boresight. The peak equals the total
// element count; directions behind the surface get 0.
double ris_gain(const DeviceSpec& spec, double steer_angle, double eval_angle, double wavelength,
                double element_spacing = 0.5);

// Angular offset from a boresight-steered beam centre at which the gain
// drops to G_max * exp(-1/2). Throws DomainError("beam too broad") when the
// main lobe never falls that low inside the visible region.
double ris_beamwidth_sigma(const DeviceSpec& spec, double wavelength,
                           double element_spacing = 0.5);

// Range accuracy (meters) of a ranging measurement at linear SNR.
double toa_sigma(double bandwidth_hz, double snr_linear);

// Bearing variance (rad^2) degraded by a logistic function of the
// measurement SNR. Equals sigma_min_sq / 0.9 at snr_max and / 0.1 at snr_min.
double aoa_variance(double sigma_min_sq, double snr_m_db, double snr_min_db, double snr_max_db);

struct SnrSample {
  double value_db = kNoSignalDb;
  std::string source_id;
  bool los = false;
};

struct PointSnr {
  double snr_db = kNoSignalDb;  // best line-of-sight sample
  std::vector<SnrSample> samples;
};

enum class SensorKind { kToa, kAoa };

// Accuracy of one measurement available at an evaluation point. `sigma` is
// in meters for ranging and radians for bearings.
struct SensorAccuracy {
  SensorKind kind = SensorKind::kToa;
  std::string sensor_id;
  Point position;
  double sigma = 0.0;
  double snr_at_measurement = kNoSignalDb;  // dB
};

// Fixed base stations followed by any BS-kind devices of the deployment
// (those get id "cs<i>").
std::vector<BaseStation> active_base_stations(const Scenario& scenario, const Deployment& d);

// Downlink SNR at `p` from every transmitter and every deployed RIS.
PointSnr snr_at_point(const Scenario& scenario, const Deployment& d, Point p);

// SNR of the pilot path UE -> RIS at `site_index` -> best base station.
// Returns kNoSignalDb unless both hops are unobstructed and in front of the
// surface.
double ris_anchor_snr(const Scenario& scenario, const Deployment& d, int site_index, Point p);

// Measurements available for a UE at `p`, each gated by line of sight and a
// minimum measurement SNR of snr_min - 10 dB.
std::vector<SensorAccuracy> sensors_at_point(const Scenario& scenario, const Deployment& d,
                                             Point p);

}  // namespace risplan

#endif  // RISPLAN_LINKBUDGET_HPP
