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

#include "risplan/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "risplan/error.hpp"
#include "risplan/units.hpp"

namespace risplan {

using nlohmann::json;

double RadioParams::wavelength() const { return wavelength_for(carrier_frequency_hz); }

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
std::string item(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(child(path, key), "missing field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path, "must be finite");
  return x;
}

double number(const json& j, const std::string& key, const std::string& path) {
  return as_number(require(j, key, path), child(path, key));
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  return as_number(j.at(key), child(path, key));
}

bool flag_or(const json& j, const std::string& key, const std::string& path, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError(child(path, key), "expected a boolean");
  return v.get<bool>();
}

int count(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ValidationError(child(path, key), "expected an integer");
  return v.get<int>();
}

const json& array(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ValidationError(child(path, key), "expected an array");
  return v;
}

Point point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ValidationError(path, "expected [x, y]");
  return {as_number(v[0], item(path, 0)), as_number(v[1], item(path, 1))};
}

Rect rect(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  const std::string p = child(path, key);
  Rect r{point(require(v, "min", p), child(p, "min")), point(require(v, "max", p), child(p, "max"))};
  if (!(r.max.x > r.min.x && r.max.y > r.min.y)) throw ValidationError(p, "max must exceed min");
  return r;
}

DeviceKind kind(const json& j, const std::string& path) {
  const json& v = require(j, "kind", path);
  if (v == "RIS") return DeviceKind::kRis;
  if (v == "BS") return DeviceKind::kBs;
  throw ValidationError(child(path, "kind"), "expected \"RIS\" or \"BS\"");
}

json to_json(Point p) { return json::array({p.x, p.y}); }
json to_json(const Rect& r) { return {{"min", to_json(r.min)}, {"max", to_json(r.max)}}; }

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("<document>", std::string("malformed document at byte ") +
                                            std::to_string(e.byte));
  }
  if (!doc.is_object()) throw ValidationError("<document>", "expected an object");

  Scenario s;
  s.area_bounds = rect(doc, "area", "");
  s.ue_area = rect(doc, "ue_area", "");
  s.grid_spacing = number_or(doc, "grid_spacing_m", "", 1.0);
  s.budget_total = number(doc, "budget_total", "");

  const json& rf = require(doc, "rf", "");
  s.rf.carrier_frequency_hz = number(rf, "freq_hz", "rf");
  s.rf.bandwidth_hz = number(rf, "bandwidth_hz", "rf");
  s.rf.noise_dbm = number(rf, "noise_dbm", "rf");
  s.rf.pathloss_exponent = number_or(rf, "gamma", "rf", 2.0);
  s.rf.snr_min_db = number(rf, "snr_min_db", "rf");
  s.rf.snr_max_db = number(rf, "snr_max_db", "rf");
  s.rf.element_spacing = number_or(rf, "element_spacing", "rf", 0.5);
  if (rf.contains("ue_tx_power_dbm")) {
    s.rf.ue_tx_power_dbm = number(rf, "ue_tx_power_dbm", "rf");
  }

  const json& bss = array(doc, "base_stations", "");
  for (size_t i = 0; i < bss.size(); ++i) {
    const std::string p = item("base_stations", i);
    const json& b = bss[i];
    BaseStation bs;
    bs.id = b.contains("id") && b.at("id").is_string() ? b.at("id").get<std::string>()
                                                       : "bs" + std::to_string(i);
    bs.position = {number(b, "x", p), number(b, "y", p)};
    bs.tx_power_dbm = number(b, "tx_power_dbm", p);
    bs.tx_gain = number_or(b, "tx_gain", p, 1.0);
    bs.has_toa = flag_or(b, "has_toa", p, true);
    bs.has_aoa = flag_or(b, "has_aoa", p, false);
    if (bs.has_aoa) bs.aoa_sigma_min_sq = number(b, "aoa_sigma_min_sq", p);
    s.base_stations.push_back(std::move(bs));
  }

  const json& sites = array(doc, "candidate_sites", "");
  for (size_t i = 0; i < sites.size(); ++i) {
    const std::string p = item("candidate_sites", i);
    s.candidate_sites.push_back({{number(sites[i], "x", p), number(sites[i], "y", p)},
                                 number_or(sites[i], "orientation_rad", p, 0.0)});
  }

  if (doc.contains("obstacles")) {
    const json& obs = array(doc, "obstacles", "");
    for (size_t i = 0; i < obs.size(); ++i) {
      const std::string p = item("obstacles", i);
      if (!obs[i].is_array()) throw ValidationError(p, "expected a vertex list");
      std::vector<Point> verts;
      for (size_t k = 0; k < obs[i].size(); ++k) verts.push_back(point(obs[i][k], item(p, k)));
      try {
        s.obstacles.emplace_back(std::move(verts));
      } catch (const std::invalid_argument& e) {
        throw ValidationError(p, e.what());
      }
    }
  }

  const json& cat = array(doc, "catalog", "");
  for (size_t i = 0; i < cat.size(); ++i) {
    const std::string p = item("catalog", i);
    const json& c = cat[i];
    DeviceSpec d;
    d.kind = kind(c, p);
    d.name = c.contains("name") && c.at("name").is_string() ? c.at("name").get<std::string>()
                                                            : "device" + std::to_string(i + 1);
    d.device_cost = number(c, "device_cost", p);
    d.install_cost = number(c, "install_cost", p);
    if (d.kind == DeviceKind::kRis) {
      d.elements_h = count(c, "elements_h", p);
      d.elements_v = count(c, "elements_v", p);
      d.aoa_sensing = flag_or(c, "aoa_sensing", p, true);
      d.toa_anchor = flag_or(c, "toa_anchor", p, true);
    } else {
      d.tx_power_dbm = number(c, "tx_power_dbm", p);
      d.tx_gain = number_or(c, "tx_gain", p, 1.0);
      d.has_toa = flag_or(c, "has_toa", p, true);
      d.has_aoa = flag_or(c, "has_aoa", p, false);
      if (d.has_aoa) d.aoa_sigma_min_sq = number(c, "aoa_sigma_min_sq", p);
    }
    s.catalog.push_back(std::move(d));
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

void validate_scenario(const Scenario& s) {
  if (!s.area_bounds.contains(s.ue_area)) throw ValidationError("ue_area", "must lie inside area");
  if (!(s.ue_area.area() > 0.0)) throw ValidationError("ue_area", "extent must be > 0");
  if (s.candidate_sites.empty()) throw ValidationError("candidate_sites", "N >= 1 violated");
  if (!(s.grid_spacing > 0.0)) throw ValidationError("grid_spacing_m", "must be > 0");
  if (!(s.budget_total >= 0.0)) throw ValidationError("budget_total", "must be >= 0");

  const RadioParams& rf = s.rf;
  if (!(rf.carrier_frequency_hz > 0.0)) throw ValidationError("rf.freq_hz", "must be > 0");
  if (!(rf.bandwidth_hz > 0.0)) throw ValidationError("rf.bandwidth_hz", "must be > 0");
  if (!(rf.pathloss_exponent > 0.0)) throw ValidationError("rf.gamma", "must be > 0");
  if (!(rf.snr_max_db > rf.snr_min_db)) {
    throw ValidationError("rf.snr_max_db", "must exceed snr_min_db");
  }
  if (!(rf.element_spacing > 0.0)) throw ValidationError("rf.element_spacing", "must be > 0");

  auto check_clear = [&](Point p, const std::string& path) {
    if (!s.area_bounds.contains(p)) throw ValidationError(path, "position outside area");
    for (size_t k = 0; k < s.obstacles.size(); ++k) {
      if (s.obstacles[k].strictly_contains(p)) {
        throw ValidationError(path, "position inside obstacles[" + std::to_string(k) + "]");
      }
    }
  };
  for (size_t i = 0; i < s.base_stations.size(); ++i) {
    const BaseStation& b = s.base_stations[i];
    const std::string p = item("base_stations", i);
    check_clear(b.position, p);
    if (!std::isfinite(b.tx_power_dbm)) throw ValidationError(p + ".tx_power_dbm", "must be finite");
    if (!(b.tx_gain > 0.0)) throw ValidationError(p + ".tx_gain", "must be > 0");
    if (b.has_aoa && !(b.aoa_sigma_min_sq > 0.0)) {
      throw ValidationError(p + ".aoa_sigma_min_sq", "must be > 0");
    }
  }
  for (size_t i = 0; i < s.candidate_sites.size(); ++i) {
    check_clear(s.candidate_sites[i].position, item("candidate_sites", i));
  }
  for (size_t i = 0; i < s.catalog.size(); ++i) {
    const DeviceSpec& d = s.catalog[i];
    const std::string p = item("catalog", i);
    if (d.device_cost < 0.0 || d.install_cost < 0.0) throw ValidationError(p, "costs must be >= 0");
    if (d.kind == DeviceKind::kRis && (d.elements_h < 1 || d.elements_v < 1)) {
      throw ValidationError(p, "RIS needs elements_h, elements_v >= 1");
    }
    if (d.kind == DeviceKind::kBs) {
      if (!(d.tx_gain > 0.0)) throw ValidationError(p + ".tx_gain", "must be > 0");
      if (d.has_aoa && !(d.aoa_sigma_min_sq > 0.0)) {
        throw ValidationError(p + ".aoa_sigma_min_sq", "must be > 0");
      }
    }
  }
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["area"] = to_json(s.area_bounds);
  doc["ue_area"] = to_json(s.ue_area);
  doc["grid_spacing_m"] = s.grid_spacing;
  doc["budget_total"] = s.budget_total;
  json rf = {{"freq_hz", s.rf.carrier_frequency_hz},
             {"bandwidth_hz", s.rf.bandwidth_hz},
             {"noise_dbm", s.rf.noise_dbm},
             {"gamma", s.rf.pathloss_exponent},
             {"snr_min_db", s.rf.snr_min_db},
             {"snr_max_db", s.rf.snr_max_db},
             {"element_spacing", s.rf.element_spacing}};
  if (s.rf.ue_tx_power_dbm) rf["ue_tx_power_dbm"] = *s.rf.ue_tx_power_dbm;
  doc["rf"] = rf;

  doc["base_stations"] = json::array();
  for (const BaseStation& b : s.base_stations) {
    json jb = {{"id", b.id},         {"x", b.position.x},        {"y", b.position.y},
               {"tx_power_dbm", b.tx_power_dbm}, {"tx_gain", b.tx_gain},
               {"has_toa", b.has_toa}, {"has_aoa", b.has_aoa}};
    if (b.has_aoa) jb["aoa_sigma_min_sq"] = b.aoa_sigma_min_sq;
    doc["base_stations"].push_back(jb);
  }
  doc["candidate_sites"] = json::array();
  for (const CandidateSite& c : s.candidate_sites) {
    doc["candidate_sites"].push_back(
        {{"x", c.position.x}, {"y", c.position.y}, {"orientation_rad", c.orientation_rad}});
  }
  doc["obstacles"] = json::array();
  for (const ConvexPolygon& poly : s.obstacles) {
    json verts = json::array();
    for (Point v : poly.vertices()) verts.push_back(to_json(v));
    doc["obstacles"].push_back(verts);
  }
  doc["catalog"] = json::array();
  for (const DeviceSpec& d : s.catalog) {
    json jd = {{"kind", d.kind == DeviceKind::kRis ? "RIS" : "BS"},
               {"name", d.name},
               {"device_cost", d.device_cost},
               {"install_cost", d.install_cost}};
    if (d.kind == DeviceKind::kRis) {
      jd["elements_h"] = d.elements_h;
      jd["elements_v"] = d.elements_v;
      jd["aoa_sensing"] = d.aoa_sensing;
      jd["toa_anchor"] = d.toa_anchor;
    } else {
      jd["tx_power_dbm"] = d.tx_power_dbm;
      jd["tx_gain"] = d.tx_gain;
      jd["has_toa"] = d.has_toa;
      jd["has_aoa"] = d.has_aoa;
      if (d.has_aoa) jd["aoa_sigma_min_sq"] = d.aoa_sigma_min_sq;
    }
    doc["catalog"].push_back(jd);
  }
  return doc.dump(2);
}

std::string scenario_digest(const Scenario& s) {
  const std::string canon = serialize_scenario(s);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool los_check(const Scenario& s, Point a, Point b) {
  for (const ConvexPolygon& poly : s.obstacles) {
    if (poly.segment_crosses_interior(a, b)) return false;
  }
  return true;
}

UeGrid ue_grid(const Scenario& s) {
  UeGrid g;
  g.nx = std::max(1, static_cast<int>(std::lround(s.ue_area.width() / s.grid_spacing)));
  g.ny = std::max(1, static_cast<int>(std::lround(s.ue_area.height() / s.grid_spacing)));
  g.dx = s.ue_area.width() / g.nx;
  g.dy = s.ue_area.height() / g.ny;
  g.first_center = {s.ue_area.min.x + 0.5 * g.dx, s.ue_area.min.y + 0.5 * g.dy};
  return g;
}

BlockageMask blockage_mask(const Scenario& s, Point anchor) {
  BlockageMask m{ue_grid(s), {}};
  m.visible.resize(m.grid.size());
  for (int j = 0; j < m.grid.ny; ++j) {
    for (int i = 0; i < m.grid.nx; ++i) {
      m.visible[m.grid.index(i, j)] = los_check(s, anchor, m.grid.center(i, j)) ? 1 : 0;
    }
  }
  return m;
}

void validate_deployment(const Scenario& s, const Deployment& d) {
  if (d.choices.size() != s.candidate_sites.size()) {
    throw ValidationError("deployment", "expected " + std::to_string(s.candidate_sites.size()) +
                                            " entries, got " + std::to_string(d.choices.size()));
  }
  for (size_t i = 0; i < d.choices.size(); ++i) {
    if (d.choices[i] < 0 || d.choices[i] > s.device_count()) {
      throw ValidationError(item("deployment", i),
                            "device index must be in [0, " + std::to_string(s.device_count()) + "]");
    }
  }
}

double deployment_cost(const Scenario& s, const Deployment& d) {
  double total = 0.0;
  for (int c : d.choices) {
    if (c != 0) total += s.device(c).total_cost();
  }
  return total;
}

Deployment parse_deployment(std::string_view text) {
  Deployment d;
  std::string token;
  std::istringstream in{std::string(text)};
  while (std::getline(in, token, ',')) {
    try {
      size_t used = 0;
      const int v = std::stoi(token, &used);
      if (token.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
      d.choices.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(item("deployment", d.choices.size()), "not an integer: '" + token + "'");
    }
  }
  return d;
}

std::string format_deployment(const Deployment& d) {
  std::string out;
  for (size_t i = 0; i < d.choices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(d.choices[i]);
  }
  return out;
}

}  // namespace risplan
