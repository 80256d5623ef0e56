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

#include "risplan/linkbudget.hpp"

#include <algorithm>
#include <cmath>

#include "risplan/error.hpp"

namespace risplan {
namespace {

// Sensors below snr_min - kSensorGateDb carry no usable information.
constexpr double kSensorGateDb = 10.0;
// Positions closer than this are treated as coincident.
constexpr double kMinLinkDistance = 1e-6;

std::string site_id(int i) { return "cs" + std::to_string(i); }

bool in_front(const CandidateSite& site, Point target) {
  return std::abs(wrap_angle(bearing(site.position, target) - site.orientation_rad)) < kPi / 2;
}

double local_angle(const CandidateSite& site, Point target) {
  return wrap_angle(bearing(site.position, target) - site.orientation_rad);
}

double uplink_power(const Scenario& s, const BaseStation& bs) {
  return s.rf.ue_tx_power_dbm.value_or(bs.tx_power_dbm);
}

}  // namespace

double friis_rx_power(double p_t_dbm, double g_t, double g_r, double wavelength, double distance,
                      double gamma) {
  if (!(distance > 0.0)) throw DomainError("friis_rx_power: distance must be > 0");
  return p_t_dbm + linear_to_db(g_t * g_r) + 20.0 * std::log10(wavelength) -
         10.0 * gamma * std::log10(4.0 * kPi * distance);
}

double ris_gain(const DeviceSpec& spec, double steer_angle, double eval_angle, double /*wavelength*/,
                double element_spacing) {
  const double eval = wrap_angle(eval_angle);
  const double steer = wrap_angle(steer_angle);
  if (std::abs(eval) >= kPi / 2 || std::abs(steer) >= kPi / 2) return 0.0;
  // The pitch is expressed in wavelengths, so lambda cancels from the phase.
  const double psi = 2.0 * kPi * element_spacing * (std::sin(eval) - std::sin(steer));
  const double n = spec.elements_h;
  const double den = n * std::sin(0.5 * psi);
  double af = 1.0;
  if (std::abs(den) > 1e-12 * n) {
    af = std::sin(0.5 * n * psi) / den;
  }
  return spec.element_count() * af * af;
}

double ris_beamwidth_sigma(const DeviceSpec& spec, double wavelength, double element_spacing) {
  const double target = std::exp(-0.5) * spec.element_count();
  const double aperture = spec.elements_h * element_spacing;
  // Main lobe ends at the first null, or at endfire when there is none.
  double hi = aperture > 1.0 ? std::asin(1.0 / aperture) : kPi / 2 - 1e-12;
  if (ris_gain(spec, 0.0, hi, wavelength, element_spacing) >= target) {
    throw DomainError("beam too broad");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ris_gain(spec, 0.0, mid, wavelength, element_spacing) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double toa_sigma(double bandwidth_hz, double snr_linear) {
  if (!(snr_linear > 0.0)) throw DomainError("toa_sigma: SNR must be > 0");
  check_positive(bandwidth_hz, "bandwidth");
  return kSpeedOfLight / (2.0 * bandwidth_hz * std::sqrt(2.0 * snr_linear));
}

double aoa_variance(double sigma_min_sq, double snr_m_db, double snr_min_db, double snr_max_db) {
  const double snr_c = 0.5 * (snr_max_db + snr_min_db);
  const double k = 2.0 * std::log(9.0) / (snr_max_db - snr_min_db);
  // (1 + e^x) / e^x written as 1 + e^-x.
  return sigma_min_sq * (1.0 + std::exp(-k * (snr_m_db - snr_c)));
}

std::vector<BaseStation> active_base_stations(const Scenario& s, const Deployment& d) {
  std::vector<BaseStation> out = s.base_stations;
  for (int i = 0; i < s.site_count(); ++i) {
    const int c = d.choices[static_cast<size_t>(i)];
    if (c == 0) continue;
    const DeviceSpec& spec = s.device(c);
    if (spec.kind != DeviceKind::kBs) continue;
    BaseStation bs;
    bs.id = site_id(i);
    bs.position = s.candidate_sites[static_cast<size_t>(i)].position;
    bs.tx_power_dbm = spec.tx_power_dbm;
    bs.tx_gain = spec.tx_gain;
    bs.has_toa = spec.has_toa;
    bs.has_aoa = spec.has_aoa;
    bs.aoa_sigma_min_sq = spec.aoa_sigma_min_sq;
    out.push_back(std::move(bs));
  }
  return out;
}

PointSnr snr_at_point(const Scenario& s, const Deployment& d, Point p) {
  const double lambda = s.rf.wavelength();
  const double gamma = s.rf.pathloss_exponent;
  const std::vector<BaseStation> stations = active_base_stations(s, d);

  PointSnr out;
  auto add = [&out](SnrSample sample) {
    if (sample.los) out.snr_db = std::max(out.snr_db, sample.value_db);
    out.samples.push_back(std::move(sample));
  };

  for (const BaseStation& bs : stations) {
    SnrSample sample{kNoSignalDb, bs.id, false};
    const double dist = distance(bs.position, p);
    if (dist > kMinLinkDistance && los_check(s, bs.position, p)) {
      sample.los = true;
      sample.value_db = friis_rx_power(bs.tx_power_dbm, bs.tx_gain, 1.0, lambda, dist, gamma) -
                        s.rf.noise_dbm;
    }
    add(std::move(sample));
  }

  for (int i = 0; i < s.site_count(); ++i) {
    const int c = d.choices[static_cast<size_t>(i)];
    if (c == 0 || s.device(c).kind != DeviceKind::kRis) continue;
    const DeviceSpec& spec = s.device(c);
    const CandidateSite& site = s.candidate_sites[static_cast<size_t>(i)];
    SnrSample sample{kNoSignalDb, site_id(i), false};

    // Strongest per-element feed from any base station.
    double feed_dbm = kNoSignalDb;
    for (const BaseStation& bs : stations) {
      const double dist = distance(bs.position, site.position);
      if (dist <= kMinLinkDistance || !in_front(site, bs.position)) continue;
      if (!los_check(s, bs.position, site.position)) continue;
      feed_dbm = std::max(feed_dbm,
                          friis_rx_power(bs.tx_power_dbm, bs.tx_gain, 1.0, lambda, dist, gamma));
    }
    const double dist = distance(site.position, p);
    if (feed_dbm > kNoSignalDb && dist > kMinLinkDistance && in_front(site, p) &&
        los_check(s, site.position, p)) {
      const double theta = local_angle(site, p);
      const double reflected_dbm = feed_dbm + linear_to_db(spec.element_count());
      const double g = ris_gain(spec, theta, theta, lambda, s.rf.element_spacing);
      sample.los = true;
      sample.value_db = friis_rx_power(reflected_dbm, g, 1.0, lambda, dist, gamma) - s.rf.noise_dbm;
    }
    add(std::move(sample));
  }
  return out;
}

double ris_anchor_snr(const Scenario& s, const Deployment& d, int site_index, Point p) {
  const int c = d.choices.at(static_cast<size_t>(site_index));
  if (c == 0 || s.device(c).kind != DeviceKind::kRis) {
    throw DomainError("ris_anchor_snr: no RIS deployed at site " + std::to_string(site_index));
  }
  const DeviceSpec& spec = s.device(c);
  const CandidateSite& site = s.candidate_sites[static_cast<size_t>(site_index)];
  const double lambda = s.rf.wavelength();
  const double gamma = s.rf.pathloss_exponent;

  const double d_up = distance(p, site.position);
  if (d_up <= kMinLinkDistance || !in_front(site, p) || !los_check(s, p, site.position)) {
    return kNoSignalDb;
  }
  double best = kNoSignalDb;
  for (const BaseStation& bs : active_base_stations(s, d)) {
    const double d_down = distance(site.position, bs.position);
    if (d_down <= kMinLinkDistance || !in_front(site, bs.position)) continue;
    if (!los_check(s, site.position, bs.position)) continue;
    const double per_element =
        friis_rx_power(uplink_power(s, bs), 1.0, 1.0, lambda, d_up, gamma);
    const double collected = per_element + linear_to_db(spec.element_count());
    const double theta = local_angle(site, bs.position);
    const double g = ris_gain(spec, theta, theta, lambda, s.rf.element_spacing);
    best = std::max(best, friis_rx_power(collected, g, bs.tx_gain, lambda, d_down, gamma));
  }
  return best == kNoSignalDb ? kNoSignalDb : best - s.rf.noise_dbm;
}

std::vector<SensorAccuracy> sensors_at_point(const Scenario& s, const Deployment& d, Point p) {
  const double lambda = s.rf.wavelength();
  const double gamma = s.rf.pathloss_exponent;
  const double gate = s.rf.snr_min_db - kSensorGateDb;
  std::vector<SensorAccuracy> out;

  for (const BaseStation& bs : active_base_stations(s, d)) {
    if (!bs.has_toa && !bs.has_aoa) continue;
    const double dist = distance(bs.position, p);
    if (dist <= kMinLinkDistance || !los_check(s, bs.position, p)) continue;
    const double snr =
        friis_rx_power(uplink_power(s, bs), 1.0, bs.tx_gain, lambda, dist, gamma) - s.rf.noise_dbm;
    if (snr < gate) continue;
    if (bs.has_toa) {
      out.push_back({SensorKind::kToa, bs.id, bs.position,
                     toa_sigma(s.rf.bandwidth_hz, db_to_linear(snr)), snr});
    }
    if (bs.has_aoa) {
      const double var = aoa_variance(bs.aoa_sigma_min_sq, snr, s.rf.snr_min_db, s.rf.snr_max_db);
      out.push_back({SensorKind::kAoa, bs.id, bs.position, std::sqrt(var), snr});
    }
  }

  for (int i = 0; i < s.site_count(); ++i) {
    const int c = d.choices[static_cast<size_t>(i)];
    if (c == 0 || s.device(c).kind != DeviceKind::kRis) continue;
    const DeviceSpec& spec = s.device(c);
    if (!spec.aoa_sensing && !spec.toa_anchor) continue;
    const double snr = ris_anchor_snr(s, d, i, p);
    if (!(snr >= gate)) continue;
    const Point pos = s.candidate_sites[static_cast<size_t>(i)].position;
    if (spec.aoa_sensing) {
      // An array too small to form a beam yields no bearing information.
      double sigma_min = 0.0;
      try {
        sigma_min = ris_beamwidth_sigma(spec, lambda, s.rf.element_spacing);
      } catch (const DomainError&) {
        sigma_min = 0.0;
      }
      if (sigma_min > 0.0) {
        const double var =
            aoa_variance(sigma_min * sigma_min, snr, s.rf.snr_min_db, s.rf.snr_max_db);
        out.push_back({SensorKind::kAoa, site_id(i), pos, std::sqrt(var), snr});
      }
    }
    if (spec.toa_anchor) {
      out.push_back({SensorKind::kToa, site_id(i), pos,
                     toa_sigma(s.rf.bandwidth_hz, db_to_linear(snr)), snr});
    }
  }
  return out;
}

}  // namespace risplan
