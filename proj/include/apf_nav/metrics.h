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

#ifndef APF_NAV_METRICS_H_
#define APF_NAV_METRICS_H_

#include <iosfwd>
#include <span>
#include <string>

#include "apf_nav/scenario_config.h"
#include "apf_nav/simulator.h"
#include "apf_nav/trajectory.h"

namespace apf_nav {

struct Metrics {
  bool goal_reached = false;
  double time_to_goal = 0.0;  // NaN when the goal was not reached
  double path_length = 0.0;
  double min_clearance = 0.0;  // to primitive surfaces; +inf for no obstacles
  double max_deviation_from_plan = 0.0;
  bool returned_to_plan = false;
  int oscillation_count = 0;
  bool stuck = false;
  // Not part of the pass/fail contract; reported alongside.
  int apf_activations = 0;
  double apf_time = 0.0;
  int x_velocity_reversals = 0;
};

struct StuckCriteria {
  double window = 30.0;         // s
  double min_progress = 0.5;    // m of new ground along the plan
  double min_apf_fraction = 0.5;
};

// True when, over the trailing `window` seconds of `ticks`, the vehicle
// covered less than `min_progress` m of new ground along the planned path
// (measured as the growth of the furthest arc length reached so far) while
// avoidance was active for more than `min_apf_fraction` of the ticks.
// Returns false for traces shorter than the window.
bool DetectLocalMinimum(std::span<const TickRecord> ticks,
                        const PlannedTrajectory& traj,
                        const StuckCriteria& criteria = {});

Metrics ComputeMetrics(const SimTrace& trace, const ScenarioConfig& config);

// Flat `key=value` lines, doubles printed with round-trip precision.
void WriteMetrics(std::ostream& out, const Metrics& metrics);
std::string FormatMetrics(const Metrics& metrics);
Metrics ParseMetrics(std::istream& in);

// One-line human summary.
std::string SummaryLine(const Metrics& metrics);

}  // namespace apf_nav

#endif  // APF_NAV_METRICS_H_
