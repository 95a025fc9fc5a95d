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

#ifndef APF_NAV_SIMULATOR_H_
#define APF_NAV_SIMULATOR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "apf_nav/apf.h"
#include "apf_nav/scenario_config.h"
#include "apf_nav/trajectory.h"

namespace apf_nav {

// One control tick. `state` is the vehicle state at `t`; the remaining fields
// are what the supervisor and tracker computed from it.
struct TickRecord {
  double t = 0.0;
  SupervisorMode mode = SupervisorMode::kFollowTrajectory;
  UavState state;
  Vec3 acceleration = Vec3::Zero();
  Vec3 jerk = Vec3::Zero();
  Vec3 snap = Vec3::Zero();  // snap that produced this state
  UavState reference;
  double f_t_magnitude = 0.0;
  Vec3 f_total_modified = Vec3::Zero();
  Vec3 f_total_translational = Vec3::Zero();
  int cluster_count = 0;
  bool soft_constrained = false;
};

struct ApfActivation {
  double t_k = 0.0;  // activation time
  double t_o = 0.0;  // time spent avoiding
};

struct SimTrace {
  std::uint64_t config_hash = 0;
  AvoidanceMode mode = AvoidanceMode::kModified;
  double dt = 0.01;
  std::vector<TickRecord> ticks;
  std::vector<ApfActivation> activations;
};

// Maximal runs of ApfActive ticks, each lasting (run length) * dt.
std::vector<ApfActivation> ExtractActivations(
    std::span<const TickRecord> ticks, double dt);

// Closed loop: sense at the scan rate, cluster, supervise, track, then
// advance the plant. Stops when the vehicle is within goal_tolerance of the
// last waypoint or the time budget is spent. Expects a validated config;
// throws std::invalid_argument otherwise.
SimTrace Run(const ScenarioConfig& config);

// Start state: first waypoint at rest, facing the first segment.
UavState InitialState(const PlannedTrajectory& traj);

PlannedTrajectory PlanFor(const ScenarioConfig& config);

}  // namespace apf_nav

#endif  // APF_NAV_SIMULATOR_H_
