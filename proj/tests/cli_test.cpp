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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "risplan/metrics.hpp"
#include "test_support.hpp"

namespace risplan {
namespace {

namespace fs = std::filesystem;

const char* kSmall = R"({
  "area": {"min": [0, 0], "max": [50, 50]},
  "ue_area": {"min": [20, 20], "max": [30, 30]},
  "grid_spacing_m": 5,
  "budget_total": 600,
  "rf": {"freq_hz": 24e9, "bandwidth_hz": 1e8, "noise_dbm": -80, "gamma": 2,
         "snr_min_db": 0, "snr_max_db": 20, "element_spacing": 0.5},
  "base_stations": [{"id": "bs0", "x": 25, "y": 5, "tx_power_dbm": 40}],
  "candidate_sites": [{"x": 5, "y": 25, "orientation_rad": 0},
                      {"x": 45, "y": 25, "orientation_rad": 3.14159}],
  "obstacles": [],
  "catalog": [{"kind": "RIS", "name": "small", "device_cost": 100, "install_cost": 200,
               "elements_h": 40, "elements_v": 10}]
})";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("risplan_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("scenario.json", kSmall);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "risplan");
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, ValidateAcceptsAGoodFile) {
  EXPECT_EQ(run({"validate", "--scenario", path("scenario.json")}), kExitOk);
  EXPECT_EQ(out_.str().rfind("ok ", 0), 0u);
  EXPECT_NE(out_.str().find("states=4"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"validate", "--scenario", path("missing.json")}), kExitRuntime);
  write("bad.json", std::string(kSmall).replace(std::string(kSmall).find("600"), 3, "-5"));
  EXPECT_EQ(run({"validate", "--scenario", path("bad.json")}), kExitValidation);
  EXPECT_NE(err_.str().find("budget_total"), std::string::npos);
  EXPECT_EQ(run({"validate"}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_EQ(run({"evaluate", "--scenario", path("scenario.json"), "--deployment", "1,1,1",
                 "--out", path("o")}),
            kExitValidation);
  EXPECT_EQ(run({"evaluate", "--scenario", path("scenario.json"), "--alpha", "2", "--out",
                 path("o")}),
            kExitValidation);
}

TEST_F(CliTest, EvaluateWritesMapsAndReport) {
  ASSERT_EQ(run({"evaluate", "--scenario", path("scenario.json"), "--deployment", "1,0",
                 "--out", path("ev"), "--heatmaps"}),
            kExitOk)
      << err_.str();
  const auto report = nlohmann::json::parse(read("ev/report.json"));
  EXPECT_EQ(report["command"], "evaluate");
  EXPECT_EQ(report["deployment"], "1,0");
  EXPECT_EQ(report["cost"], 300.0);
  std::istringstream csv(read("ev/maps.csv"));
  const Aggregates a = aggregate_metric_csv(csv);
  EXPECT_NEAR(a.c_s, report["c_s"].get<double>(), 1e-12);
  EXPECT_NEAR(a.l_s, report["l_s"].get<double>(), 1e-12);
  EXPECT_TRUE(fs::exists(dir_ / "ev" / "m.pgm"));
}

TEST_F(CliTest, OptimizeIsReproducible) {
  const std::vector<std::string> base{"optimize", "--scenario", path("scenario.json"),
                                      "--episodes", "20", "--restarts", "2", "--alpha", "1"};
  auto a = base;
  a.insert(a.end(), {"--out", path("a")});
  auto b = base;
  b.insert(b.end(), {"--out", path("b")});
  ASSERT_EQ(run(a), kExitOk) << err_.str();
  ASSERT_EQ(run(b), kExitOk);
  EXPECT_EQ(read("a/maps.csv"), read("b/maps.csv"));
  const auto ra = nlohmann::json::parse(read("a/report.json"));
  const auto rb = nlohmann::json::parse(read("b/report.json"));
  EXPECT_EQ(ra["best_deployment"], rb["best_deployment"]);
  EXPECT_EQ(ra["label"], "localization-focused");
  EXPECT_LE(ra["best"]["cost"].get<double>(), 600.0);
  EXPECT_NE(read("a/run_log.txt").find("restart: 1"), std::string::npos);
}

TEST_F(CliTest, SweepReportsEveryBudget) {
  ASSERT_EQ(run({"sweep-budget", "--scenario", path("scenario.json"), "--budgets", "0,300,600",
                 "--episodes", "20", "--out", path("sw")}),
            kExitOk)
      << err_.str();
  const std::string csv = read("sw/sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n0,0,0,0,"), std::string::npos);
}

TEST_F(CliTest, LocateFindsTheReadingsSource) {
  // Ranges from the base station and both sites to (25, 25).
  write("m.csv",
        "sensor_id,kind,value,sigma,nlos_bias\n"
        "bs0,toa,20,0.2,0\ncs0,toa,20,0.2,0\ncs1,toa,20,0.2,0\n");
  ASSERT_EQ(run({"locate", "--scenario", path("scenario.json"), "--measurements", path("m.csv"),
                 "--spacing", "0.1", "--out", path("loc")}),
            kExitOk)
      << err_.str();
  const auto report = nlohmann::json::parse(read("loc/report.json"));
  EXPECT_NEAR(report["estimate"][0].get<double>(), 25.0, 0.11);
  EXPECT_NEAR(report["estimate"][1].get<double>(), 25.0, 0.11);
  EXPECT_TRUE(fs::exists(dir_ / "loc" / "posterior.csv"));
}

}  // namespace
}  // namespace risplan
