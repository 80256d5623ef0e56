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

#ifndef RISPLAN_SCENARIO_HPP
#define RISPLAN_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risplan/geometry.hpp"

namespace risplan {

struct RadioParams {
  double carrier_frequency_hz = 24e9;
  double bandwidth_hz = 100e6;
  double noise_dbm = -80.0;
  double pathloss_exponent = 2.0;
  double snr_min_db = 0.0;
  double snr_max_db = 20.0;
  // RIS element pitch as a fraction of the wavelength.
  double element_spacing = 0.5;
  // UE pilot power for uplink sensing. When unset, each uplink path uses the
  // transmit power of the base station it terminates at.
  std::optional<double> ue_tx_power_dbm;

  double wavelength() const;
};

struct BaseStation {
  std::string id;
  Point position;
  double tx_power_dbm = 30.0;
  double tx_gain = 1.0;  // linear
  bool has_toa = true;
  bool has_aoa = false;
  double aoa_sigma_min_sq = 0.0;  // rad^2, meaningful iff has_aoa
};

enum class DeviceKind { kRis, kBs };

struct DeviceSpec {
  DeviceKind kind = DeviceKind::kRis;
  std::string name;
  int elements_h = 1;
  int elements_v = 1;
  double device_cost = 0.0;
  double install_cost = 0.0;

  // RIS sensing toggles.
  bool aoa_sensing = true;
  bool toa_anchor = true;

  // Used when kind == kBs.
  double tx_power_dbm = 30.0;
  double tx_gain = 1.0;
  bool has_toa = true;
  bool has_aoa = false;
  double aoa_sigma_min_sq = 0.0;

  int element_count() const { return elements_h * elements_v; }
  double total_cost() const { return device_cost + install_cost; }
};

struct CandidateSite {
  Point position;
  double orientation_rad = 0.0;  // boresight azimuth of an installed RIS
};

// Entry i of `choices` is the catalog index (1-based) installed at candidate
// site i, or 0 for an empty site.
struct Deployment {
  std::vector<int> choices;

  friend bool operator==(const Deployment&, const Deployment&) = default;
};

struct Scenario {
  Rect area_bounds;
  Rect ue_area;
  std::vector<BaseStation> base_stations;
  std::vector<CandidateSite> candidate_sites;
  std::vector<ConvexPolygon> obstacles;
  std::vector<DeviceSpec> catalog;
  double budget_total = 0.0;
  double grid_spacing = 1.0;
  RadioParams rf;

  int site_count() const { return static_cast<int>(candidate_sites.size()); }
  int device_count() const { return static_cast<int>(catalog.size()); }
  // `index` is 1-based.
  const DeviceSpec& device(int index) const { return catalog.at(static_cast<size_t>(index - 1)); }
};

// Throws ValidationError naming the field path of the first violation.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& scenario);

// Checks every Scenario invariant; throws ValidationError.
void validate_scenario(const Scenario& scenario);

// FNV-1a digest of the canonical serialization, as 16 hex digits.
std::string scenario_digest(const Scenario& scenario);

// True iff the segment a-b crosses no obstacle interior.
bool los_check(const Scenario& scenario, Point a, Point b);

// Uniform grid of cell centers over the UE area, at the scenario's spacing
// (rounded so an integer number of cells tiles the area).
struct UeGrid {
  Point first_center;
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  size_t size() const { return static_cast<size_t>(nx) * static_cast<size_t>(ny); }
  Point center(int i, int j) const { return {first_center.x + i * dx, first_center.y + j * dy}; }
  // Row-major with x fastest.
  size_t index(int i, int j) const { return static_cast<size_t>(j) * nx + static_cast<size_t>(i); }
};

UeGrid ue_grid(const Scenario& scenario);

struct BlockageMask {
  UeGrid grid;
  std::vector<std::uint8_t> visible;  // 1 = line of sight to the anchor

  bool at(int i, int j) const { return visible[grid.index(i, j)] != 0; }
};

BlockageMask blockage_mask(const Scenario& scenario, Point anchor);

// Throws ValidationError when the vector has the wrong length or an index
// outside [0, V].
void validate_deployment(const Scenario& scenario, const Deployment& d);

// Sum of device and install cost over occupied sites.
double deployment_cost(const Scenario& scenario, const Deployment& d);

// Parses "0,2,1,0" style vectors.
Deployment parse_deployment(std::string_view text);
std::string format_deployment(const Deployment& d);

}  // namespace risplan

#endif  // RISPLAN_SCENARIO_HPP
