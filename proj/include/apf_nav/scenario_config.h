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

#ifndef APF_NAV_SCENARIO_CONFIG_H_
#define APF_NAV_SCENARIO_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apf_nav/apf.h"
#include "apf_nav/lidar.h"
#include "apf_nav/mpc_tracker.h"
#include "apf_nav/scene.h"
#include "apf_nav/trajectory.h"
#include "json.hpp"

namespace apf_nav {

// Conventional mode is the same pipeline with k_rr forced to zero.
enum class AvoidanceMode { kConventional, kModified };

enum class PlantModel { kIdeal, kFirstOrderLag };

struct ClusteringConfig {
  double c_tolerance = 1.0;
  std::size_t min_cluster_size = 1;
};

struct SensorConfig {
  LidarModel lidar;
  double scan_rate = 10.0;  // Hz
};

struct SimConfig {
  double dt = 0.01;
  double time_budget = 300.0;
  double goal_tolerance = 0.5;
  std::uint64_t seed = 0;
  PlantModel plant = PlantModel::kIdeal;
  double lag_time_constant = 0.2;
  double dt_knot = 0.01;
  // Local-minimum detector: progress below stuck_min_progress over
  // stuck_window seconds with avoidance active more than half the time.
  double stuck_window = 30.0;
  double stuck_min_progress = 0.5;
};

struct ScenarioConfig {
  std::string name;
  Scene scene;
  std::vector<Vec3> waypoints;
  DynamicLimits limits;
  ApfParams apf;
  ClusteringConfig clustering;
  SensorConfig sensor;
  MpcConfig mpc;
  SimConfig sim;
  AvoidanceMode mode = AvoidanceMode::kModified;

  // Field parameters with the mode applied.
  ApfParams EffectiveApf() const;
};

enum class DiagnosticKind { kParse, kSchema, kPhysical };

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::kSchema;
  std::string path;
  std::string message;

  std::string ToString() const;
};

struct ParseResult {
  std::optional<ScenarioConfig> config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return config.has_value() && diagnostics.empty(); }
};

// Schema check (types, required keys, per-field ranges) followed by the
// cross-field physical checks. Unknown keys are schema violations.
ParseResult ParseScenario(const nlohmann::json& doc);
ParseResult ParseScenarioText(const std::string& text);
ParseResult LoadScenarioFile(const std::string& path);

// Cross-field consistency of an already well-typed config.
std::vector<Diagnostic> CheckPhysical(const ScenarioConfig& config);

// Canonical document (all fields, defaults filled in, keys sorted).
nlohmann::json ToJson(const ScenarioConfig& config);

// FNV-1a over the canonical document.
std::uint64_t ConfigHash(const ScenarioConfig& config);

std::string ModeName(AvoidanceMode mode);
std::optional<AvoidanceMode> ParseModeName(const std::string& name);

}  // namespace apf_nav

#endif  // APF_NAV_SCENARIO_CONFIG_H_
