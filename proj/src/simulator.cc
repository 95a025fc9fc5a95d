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

#include "apf_nav/simulator.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "apf_nav/lidar.h"
#include "apf_nav/mpc_tracker.h"
#include "apf_nav/pointcloud.h"

namespace apf_nav {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr double kSettleSpeed = 1e-2;  // m/s

}  // namespace

std::vector<ApfActivation> ExtractActivations(
    std::span<const TickRecord> ticks, double dt) {
  std::vector<ApfActivation> out;
  long run = 0;
  double start = 0.0;
  for (const TickRecord& tick : ticks) {
    if (tick.mode == SupervisorMode::kApfActive) {
      if (run == 0) start = tick.t;
      ++run;
    } else if (run > 0) {
      out.push_back({start, static_cast<double>(run) * dt});
      run = 0;
    }
  }
  if (run > 0) out.push_back({start, static_cast<double>(run) * dt});
  return out;
}

PlannedTrajectory PlanFor(const ScenarioConfig& config) {
  return PlannedTrajectory::Plan(config.waypoints, config.limits,
                                 config.sim.dt_knot);
}

UavState InitialState(const PlannedTrajectory& traj) {
  UavState s = traj.Sample(0.0);
  s.velocity.setZero();
  s.yaw_rate = 0.0;
  return s;
}

SimTrace Run(const ScenarioConfig& config) {
  if (!CheckPhysical(config).empty()) {
    throw std::invalid_argument("Run: config fails physical checks");
  }
  const PlannedTrajectory traj = PlanFor(config);
  const ApfParams params = config.EffectiveApf();
  const SimConfig& sim = config.sim;
  const Vec3 goal = config.waypoints.back();

  SimTrace trace;
  trace.config_hash = ConfigHash(config);
  trace.mode = config.mode;
  trace.dt = sim.dt;

  UavState state = InitialState(traj);
  MpcTracker tracker(config.mpc, config.limits.yaw_rate_max, state);
  TrajectoryPoint last_point = tracker.current();
  SupervisorState sup;
  sup.last_heading = traj.Heading(0.0);

  const long ticks_per_scan = std::max(
      1L, std::lround(1.0 / (config.sensor.scan_rate * sim.dt)));
  const long max_ticks =
      static_cast<long>(std::floor(sim.time_budget / sim.dt + 1e-9));
  trace.ticks.reserve(static_cast<size_t>(max_ticks) + 1);

  PointCloud cloud;
  std::vector<Cluster> clusters;
  long scan_index = 0;

  for (long k = 0; k <= max_ticks; ++k) {
    const double t = static_cast<double>(k) * sim.dt;
    if (k % ticks_per_scan == 0) {
      cloud = Raycast(config.scene, {state.position, state.yaw},
                      config.sensor.lidar,
                      SplitMix64(sim.seed ^ SplitMix64(scan_index++)));
      clusters = EuclideanCluster(cloud, config.clustering.c_tolerance,
                                  config.clustering.min_cluster_size);
    }
    const SupervisorOutput out =
        SupervisorStep(state, traj, clusters, t, sup, params, sim.dt, &cloud);

    TickRecord rec;
    rec.t = t;
    rec.mode = out.state.mode;
    rec.state = state;
    rec.acceleration = last_point.acceleration;
    rec.jerk = last_point.jerk;
    rec.snap = last_point.snap;
    rec.soft_constrained = last_point.soft_constrained;
    rec.reference = out.reference;
    rec.f_t_magnitude = out.field.f_t_magnitude;
    rec.f_total_modified = out.field.f_total_modified;
    rec.f_total_translational = out.field.f_total_translational;
    rec.cluster_count = static_cast<int>(clusters.size());
    trace.ticks.push_back(rec);
    sup = out.state;

    // Keep flying after first arrival until the plan is over and the vehicle
    // has come to rest, so the flown path ends at the goal itself.
    if ((state.position - goal).norm() <= sim.goal_tolerance &&
        t >= traj.duration() && state.velocity.norm() <= kSettleSpeed) {
      break;
    }
    if (k == max_ticks) break;

    last_point = tracker.Step(out.reference);
    if (sim.plant == PlantModel::kIdeal) {
      state.position = last_point.position;
      state.velocity = last_point.velocity;
    } else {
      const double alpha = sim.dt / sim.lag_time_constant;
      state.position += alpha * (last_point.position - state.position);
      state.velocity += alpha * (last_point.velocity - state.velocity);
    }
    const double new_yaw = last_point.yaw;
    state.yaw_rate = WrapAngle(new_yaw - state.yaw) / sim.dt;
    state.yaw = new_yaw;
  }
  trace.activations = ExtractActivations(trace.ticks, sim.dt);
  return trace;
}

}  // namespace apf_nav
