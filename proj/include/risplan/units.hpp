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

#ifndef RISPLAN_UNITS_HPP
#define RISPLAN_UNITS_HPP

#include <cmath>
#include <limits>
#include <numbers>

namespace risplan {

// Nominal propagation speed. Link-budget and ranging figures in this library
// are quoted against c = 3e8 m/s (24 GHz <-> 12.5 mm).
inline constexpr double kSpeedOfLight = 3.0e8;

inline constexpr double kPi = std::numbers::pi;

// Sentinel for "no line-of-sight source": SNR in dB of an absent link.
inline constexpr double kNoSignalDb = -std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline double wavelength_for(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace risplan

#endif  // RISPLAN_UNITS_HPP
