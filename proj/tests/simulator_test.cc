// Copyright 2026 The apf_nav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "apf_nav/metrics.h"
#include "apf_nav/scenario_config.h"
#include "apf_nav/simulator.h"
#include "apf_nav/trace_io.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace apf_nav {
namespace {

using nlohmann::json;

std::string ScenarioPath(const std::string& name) {
  return std::string(APF_NAV_SCENARIO_DIR) + "/" + name;
}

json ScenarioDoc(const std::string& name) {
  std::ifstream f(ScenarioPath(name));
  return json::parse(f);
}

ScenarioConfig Load(const std::string& name) {
  const ParseResult r = LoadScenarioFile(ScenarioPath(name));
  EXPECT_TRUE(r.ok());
  return *r.config;
}

bool Mentions(const ParseResult& r, const std::string& path,
              DiagnosticKind kind) {
  for (const Diagnostic& d : r.diagnostics) {
    if (d.path == path && d.kind == kind) return true;
  }
  return false;
}

TEST(ConfigTest, ShippedScenariosAreValid) {
  for (const char* name :
       {"scenario1_wall.json", "scenario2_small_wall.json",
        "scenario3_cylinders.json", "scenario4_maze.json",
        "empty_smoke.json"}) {
    const ParseResult r = LoadScenarioFile(ScenarioPath(name));
    EXPECT_TRUE(r.ok()) << name << ": "
                        << (r.diagnostics.empty()
                                ? ""
                                : r.diagnostics[0].ToString());
  }
}

TEST(ConfigTest, ScenarioGainsAreVerbatim) {
  const ScenarioConfig s1 = Load("scenario1_wall.json");
  EXPECT_EQ(s1.apf.k_rt, 153);
  EXPECT_EQ(s1.apf.k_rr, 1720);
  EXPECT_EQ(s1.apf.d_0, 15);
  EXPECT_EQ(s1.apf.f_threshold, 0.2);
  EXPECT_EQ(s1.clustering.c_tolerance, 1.0);
  const ScenarioConfig s3 = Load("scenario3_cylinders.json");
  EXPECT_EQ(s3.apf.k_rt, 95);
  EXPECT_EQ(s3.apf.k_rr, 600);
  EXPECT_EQ(s3.apf.f_threshold, 1.6);
  EXPECT_EQ(s3.limits.v_max, Vec3::Constant(1.5));
  const ScenarioConfig s4 = Load("scenario4_maze.json");
  EXPECT_EQ(s4.apf.k_rt, 800);
  EXPECT_EQ(s4.apf.k_rr, 0.5);
  EXPECT_EQ(s4.apf.d_0, 10);
  EXPECT_EQ(s4.apf.f_threshold, 1.0);
}

TEST(ConfigTest, NegativeInfluenceDistanceIsSchemaViolation) {
  json doc = ScenarioDoc("scenario1_wall.json");
  doc["apf"]["d_0"] = -1;
  EXPECT_TRUE(Mentions(ParseScenario(doc), "apf.d_0", DiagnosticKind::kSchema));
}

TEST(ConfigTest, MissingWaypoints) {
  json doc = ScenarioDoc("scenario1_wall.json");
  doc.erase("waypoints");
  EXPECT_TRUE(
      Mentions(ParseScenario(doc), "waypoints", DiagnosticKind::kSchema));
}

TEST(ConfigTest, UnknownKeyIsRejected) {
  json doc = ScenarioDoc("scenario1_wall.json");
  doc["apf"]["k_rot"] = 3;
  EXPECT_TRUE(
      Mentions(ParseScenario(doc), "apf.k_rot", DiagnosticKind::kSchema));
}

TEST(ConfigTest, MalformedTextIsParseError) {
  const ParseResult r = ParseScenarioText("{\"waypoints\": [");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].kind, DiagnosticKind::kParse);
}

TEST(ConfigTest, StartInsideObstacleIsPhysical) {
  json doc = ScenarioDoc("scenario1_wall.json");
  doc["waypoints"][0] = {35, 0, 3};
  EXPECT_TRUE(
      Mentions(ParseScenario(doc), "waypoints[0]", DiagnosticKind::kPhysical));
}

TEST(ConfigTest, HashIgnoresKeyOrderButNotValues) {
  const ScenarioConfig a = Load("scenario1_wall.json");
  const ParseResult b = ParseScenario(ToJson(a));
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(ConfigHash(a), ConfigHash(*b.config));
  ScenarioConfig c = a;
  c.apf.k_rr = 1721;
  EXPECT_NE(ConfigHash(a), ConfigHash(c));
}

TickRecord Tick(double t, double x, SupervisorMode mode) {
  TickRecord r;
  r.t = t;
  r.state.position = {x, 0, 3};
  r.mode = mode;
  return r;
}

class DetectorTest : public ::testing::Test {
 protected:
  DetectorTest()
      : traj_(PlannedTrajectory::Plan(wps_, DynamicLimits{})) {}
  std::vector<Vec3> wps_ = {{0, 0, 3}, {70, 0, 3}};
  PlannedTrajectory traj_;
};

TEST_F(DetectorTest, OscillationAtWallIsStuck) {
  std::vector<TickRecord> ticks;
  for (int k = 0; k <= 4000; ++k) {
    const double t = 0.01 * k;
    // Back and forth between x = 21.8 and 22.2 once every two seconds.
    const double x = 22.0 + 0.2 * std::sin(std::numbers::pi * t);
    const auto mode = std::fmod(t, 2.0) < 1.4 ? SupervisorMode::kApfActive
                                              : SupervisorMode::kFollowTrajectory;
    ticks.push_back(Tick(t, x, mode));
  }
  EXPECT_TRUE(DetectLocalMinimum(ticks, traj_));
}

TEST_F(DetectorTest, SteadyProgressIsNotStuck) {
  std::vector<TickRecord> ticks;
  for (int k = 0; k <= 4000; ++k) {
    // 1 m/s along the plan.
    ticks.push_back(Tick(0.01 * k, 0.01 * k, SupervisorMode::kApfActive));
  }
  EXPECT_FALSE(DetectLocalMinimum(ticks, traj_));
}

TEST_F(DetectorTest, HoverAtGoalIsNotStuck) {
  std::vector<TickRecord> ticks;
  for (int k = 0; k <= 4000; ++k) {
    ticks.push_back(Tick(0.01 * k, 70.0, SupervisorMode::kFollowTrajectory));
  }
  EXPECT_FALSE(DetectLocalMinimum(ticks, traj_));
}

TEST_F(DetectorTest, ShortTraceIsNotStuck) {
  std::vector<TickRecord> ticks;
  for (int k = 0; k < 100; ++k) {
    ticks.push_back(Tick(0.01 * k, 22.0, SupervisorMode::kApfActive));
  }
  EXPECT_FALSE(DetectLocalMinimum(ticks, traj_));
}

TEST(SimulatorTest, EmptySceneFlightIsClean) {
  const ScenarioConfig cfg = Load("empty_smoke.json");
  const SimTrace trace = apf_nav::Run(cfg);
  const Metrics m = ComputeMetrics(trace, cfg);
  EXPECT_TRUE(m.goal_reached);
  EXPECT_TRUE(trace.activations.empty());
  EXPECT_EQ(m.oscillation_count, 0);
  EXPECT_LT(m.max_deviation_from_plan, 0.1);
  EXPECT_TRUE(std::isinf(m.min_clearance));
  // Ticks uniformly spaced.
  for (size_t i = 0; i < trace.ticks.size(); ++i) {
    ASSERT_EQ(trace.ticks[i].t, static_cast<double>(i) * cfg.sim.dt);
  }
}

TEST(SimulatorTest, StraightRunPathLength) {
  ScenarioConfig cfg = Load("empty_smoke.json");
  cfg.sim.goal_tolerance = 0.2;
  const SimTrace trace = apf_nav::Run(cfg);
  const Metrics m = ComputeMetrics(trace, cfg);
  ASSERT_TRUE(m.goal_reached);
  // Independent integration of the flown polyline.
  double length = 0.0;
  for (size_t i = 1; i < trace.ticks.size(); ++i) {
    length += (trace.ticks[i].state.position -
               trace.ticks[i - 1].state.position)
                  .norm();
  }
  EXPECT_DOUBLE_EQ(m.path_length, length);
  EXPECT_GE(m.path_length, 10.0);
  EXPECT_LE(m.path_length, 10.05);
}

TEST(SimulatorTest, ModeTimeIsConserved) {
  const ScenarioConfig cfg = Load("scenario2_small_wall.json");
  const SimTrace trace = apf_nav::Run(cfg);
  ASSERT_FALSE(trace.activations.empty());
  long active = 0;
  for (const TickRecord& t : trace.ticks) {
    active += t.mode == SupervisorMode::kApfActive;
  }
  double total = 0.0;
  for (const ApfActivation& a : trace.activations) {
    EXPECT_GE(a.t_o, 0.0);
    total += a.t_o;
  }
  EXPECT_NEAR(total, active * cfg.sim.dt, cfg.sim.dt);

  const Metrics m = ComputeMetrics(trace, cfg);
  EXPECT_TRUE(m.goal_reached);
  EXPECT_TRUE(m.returned_to_plan);
  EXPECT_GT(m.min_clearance, 0.3);
  const Vec3 chord = cfg.waypoints.back() - cfg.waypoints.front();
  EXPECT_GE(m.path_length, chord.norm() - 1e-6);
}

TEST(TraceIoTest, RoundTripReproducesMetrics) {
  const ScenarioConfig cfg = Load("scenario2_small_wall.json");
  const SimTrace trace = apf_nav::Run(cfg);
  const std::string text = FormatTrace(trace);
  std::istringstream in(text);
  const SimTrace parsed = ParseTrace(in);
  EXPECT_EQ(FormatTrace(parsed), text);
  EXPECT_EQ(parsed.config_hash, ConfigHash(cfg));
  const std::string metrics_file = FormatMetrics(ComputeMetrics(trace, cfg));
  EXPECT_EQ(FormatMetrics(ComputeMetrics(parsed, cfg)), metrics_file);
  std::istringstream min(metrics_file);
  EXPECT_EQ(FormatMetrics(ParseMetrics(min)), metrics_file);
}

TEST(TraceIoTest, RejectsGarbage) {
  std::istringstream in("not a trace\n");
  EXPECT_THROW(ParseTrace(in), std::runtime_error);
}

}  // namespace
}  // namespace apf_nav
