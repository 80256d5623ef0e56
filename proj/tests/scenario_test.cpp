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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "risplan/error.hpp"
#include "test_support.hpp"

namespace risplan {
namespace {

std::string shipped_text() {
  std::ifstream in(testing::source_path("scenarios/isac_50m.json"));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_path(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<no error>";
}

const char* kMinimal = R"({
  "area": {"min": [0, 0], "max": [20, 20]},
  "ue_area": {"min": [5, 5], "max": [15, 15]},
  "budget_total": 500,
  "rf": {"freq_hz": 24e9, "bandwidth_hz": 1e8, "noise_dbm": -80,
         "snr_min_db": 0, "snr_max_db": 20},
  "base_stations": [{"x": 10, "y": 1, "tx_power_dbm": 30}],
  "candidate_sites": [{"x": 1, "y": 10, "orientation_rad": 0}],
  "obstacles": [[[8, 8], [12, 8], [12, 12], [8, 12]]],
  "catalog": [{"kind": "RIS", "device_cost": 100, "install_cost": 50,
               "elements_h": 10, "elements_v": 10}]
})";

TEST(Scenario, ShippedFileParses) {
  const Scenario s = parse_scenario(shipped_text());
  EXPECT_EQ(s.site_count(), 6);
  EXPECT_EQ(s.device_count(), 2);
  EXPECT_DOUBLE_EQ(s.budget_total, 1200.0);
  EXPECT_DOUBLE_EQ(s.rf.carrier_frequency_hz, 24e9);
  EXPECT_DOUBLE_EQ(s.device(1).total_cost(), 300.0);
  EXPECT_DOUBLE_EQ(s.device(2).total_cost(), 600.0);
  EXPECT_EQ(s.device(2).element_count(), 1600);
}

TEST(Scenario, DefaultsApply) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_DOUBLE_EQ(s.grid_spacing, 1.0);
  EXPECT_DOUBLE_EQ(s.rf.pathloss_exponent, 2.0);
  EXPECT_DOUBLE_EQ(s.rf.element_spacing, 0.5);
  EXPECT_FALSE(s.rf.ue_tx_power_dbm.has_value());
  EXPECT_TRUE(s.base_stations[0].has_toa);
  EXPECT_NEAR(s.rf.wavelength(), 0.0125, 1e-15);
}

TEST(Scenario, SerializationRoundTrips) {
  const Scenario a = parse_scenario(shipped_text());
  const Scenario b = parse_scenario(serialize_scenario(a));
  EXPECT_EQ(serialize_scenario(a), serialize_scenario(b));
  EXPECT_EQ(scenario_digest(a), scenario_digest(b));
  EXPECT_EQ(scenario_digest(a).size(), 16u);
}

TEST(Scenario, DigestSeesEveryField) {
  const Scenario a = parse_scenario(kMinimal);
  Scenario b = a;
  b.budget_total += 1;
  EXPECT_NE(scenario_digest(a), scenario_digest(b));
}

TEST(Scenario, TruncatedDocumentReportsPosition) {
  const std::string text = shipped_text();
  try {
    parse_scenario(text.substr(0, text.size() / 2));
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.path(), "<document>");
    EXPECT_NE(std::string(e.what()).find("malformed document at byte"), std::string::npos);
  }
}

TEST(Scenario, FieldErrorsNameTheirPath) {
  std::string t = kMinimal;
  EXPECT_EQ(error_path(std::string(t).replace(t.find("\"x\": 1,"), 7, "\"x\": \"a\",")),
            "candidate_sites[0].x");
  EXPECT_EQ(error_path(std::string(t).replace(t.find("\"RIS\""), 5, "\"XY\"")), "catalog[0].kind");
  EXPECT_EQ(error_path(std::string(t).replace(t.find("\"budget_total\": 500,"), 20, "")),
            "budget_total");
}

TEST(Scenario, SiteInsideObstacleIsRejected) {
  std::string t = kMinimal;
  t.replace(t.find("{\"x\": 1, \"y\": 10,"), 18, "{\"x\": 10, \"y\": 10,");
  try {
    parse_scenario(t);
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.path(), "candidate_sites[0]");
    EXPECT_NE(std::string(e.what()).find("obstacles[0]"), std::string::npos);
  }
}

TEST(Scenario, EmptySiteListIsRejected) {
  std::string t = kMinimal;
  const size_t b = t.find("[", t.find("candidate_sites"));
  const size_t e = t.find("]", b);
  t.replace(b, e - b + 1, "[]");
  EXPECT_EQ(error_path(t), "candidate_sites");
}

TEST(Scenario, LineOfSight) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_FALSE(los_check(s, {10, 1}, {10, 19}));
  EXPECT_TRUE(los_check(s, {10, 1}, {19, 1}));
  EXPECT_TRUE(los_check(s, {8, 1}, {8, 19}));  // grazes the obstacle face
}

TEST(Scenario, UeGridCoversArea) {
  const Scenario s = parse_scenario(shipped_text());
  const UeGrid g = ue_grid(s);
  EXPECT_EQ(g.nx, 30);
  EXPECT_EQ(g.ny, 30);
  EXPECT_DOUBLE_EQ(g.center(0, 0).x, 10.5);
  EXPECT_DOUBLE_EQ(g.center(29, 29).y, 39.5);
}

TEST(Deployment, ParseValidateCost) {
  const Scenario s = parse_scenario(shipped_text());
  const Deployment d = parse_deployment("0,1,2,0,0,0");
  EXPECT_EQ(format_deployment(d), "0,1,2,0,0,0");
  EXPECT_NO_THROW(validate_deployment(s, d));
  EXPECT_DOUBLE_EQ(deployment_cost(s, d), 900.0);
  EXPECT_THROW(validate_deployment(s, parse_deployment("0,1")), ValidationError);
  EXPECT_THROW(validate_deployment(s, parse_deployment("0,3,0,0,0,0")), ValidationError);
  EXPECT_THROW(parse_deployment("0,x"), ValidationError);
}

TEST(Deployment, CostIsAdditiveOverSites) {
  const Scenario s = parse_scenario(shipped_text());
  testing::Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    Deployment d{std::vector<int>(6)};
    double expected = 0.0;
    for (int& c : d.choices) {
      c = gen.integer(0, 2);
      if (c) expected += s.device(c).total_cost();
    }
    EXPECT_DOUBLE_EQ(deployment_cost(s, d), expected);
  }
}

}  // namespace
}  // namespace risplan
