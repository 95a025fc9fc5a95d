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

#ifndef APF_NAV_APF_H_
#define APF_NAV_APF_H_

#include <span>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "apf_nav/pointcloud.h"
#include "apf_nav/scene.h"
#include "apf_nav/trajectory.h"

namespace apf_nav {

// Which point of a cluster stands in for the obstacle position.
enum class ObstacleReference { kCentroid, kNearestPoint };

// Repulsive field parameters. There is no attractive term: the global
// trajectory plays that role.
struct ApfParams {
  double k_rt = 153.0;         // translational gain
  double k_rr = 1720.0;        // rotational gain
  double d_0 = 15.0;           // influence distance, m
  double f_threshold = 0.2;    // switch to avoidance when F_t >= this
  double step_gain = 1.0;      // m of reference offset per unit force
  double d_min = 0.1;          // distances below this are evaluated here
  ObstacleReference obstacle_reference = ObstacleReference::kCentroid;
};

std::vector<std::string> ValidateApfParams(const ApfParams& params,
                                           const std::string& path = "apf");

struct FieldFlags {
  bool distance_clamped = false;
  // Obstacle straight above or below: no planar offset to rotate.
  bool planar_degenerate = false;

  FieldFlags& operator|=(const FieldFlags& o) {
    distance_clamped |= o.distance_clamped;
    planar_degenerate |= o.planar_degenerate;
    return *this;
  }
};

struct PotentialValue {
  double value = 0.0;
  FieldFlags flags;
};

struct ForceValue {
  Vec3 force = Vec3::Zero();
  FieldFlags flags;
};

// 0.5 * k_rt * (1/d - 1/d_0)^2 inside the influence distance, else 0.
PotentialValue RepulsivePotential(const Vec3& q, const Vec3& q_o,
                                  const ApfParams& params);

// Negative gradient of RepulsivePotential:
// k_rt * (1/d - 1/d_0) / d^3 * (q - q_o).
ForceValue TranslationalForce(const Vec3& q, const Vec3& q_o,
                              const ApfParams& params);

// Circulation direction selected by the sign of theta = wrap(phi - rho):
// clockwise [[0, 1], [-1, 0]] for theta >= 0, counterclockwise otherwise.
Eigen::Matrix2d RotationDirection(double phi, double rho);

// Planar force perpendicular to the X-Y offset from the obstacle, scaled like
// the translational force but with k_rr. `phi` is the trajectory heading.
ForceValue RotationalForce(const Vec3& q, const Vec3& q_o, double phi,
                           const ApfParams& params);

struct ClusterForce {
  int cluster_id = 0;
  Vec3 obstacle = Vec3::Zero();  // q_o used for this cluster
  Vec3 f_rt = Vec3::Zero();
  Vec3 f_rr = Vec3::Zero();
  Vec3 f_r = Vec3::Zero();
  double distance = 0.0;
  double theta = 0.0;
};

struct ForceField {
  std::vector<ClusterForce> per_cluster;
  Vec3 f_total_translational = Vec3::Zero();
  Vec3 f_total_modified = Vec3::Zero();
  // Norm of the summed translational components. Drives mode switching.
  double f_t_magnitude = 0.0;
  FieldFlags flags;
};

// Field from explicit obstacle positions, one per cluster.
ForceField TotalForce(const Vec3& q, std::span<const Vec3> obstacles,
                      double phi, const ApfParams& params);

// Field from clusters. With ObstacleReference::kNearestPoint the member point
// closest to q is used and `cloud` must be the clusters' source cloud.
ForceField TotalForce(const Vec3& q, std::span<const Cluster> clusters,
                      double phi, const ApfParams& params,
                      const PointCloud* cloud = nullptr);

std::vector<Vec3> ObstacleReferences(const Vec3& q,
                                     std::span<const Cluster> clusters,
                                     ObstacleReference mode,
                                     const PointCloud* cloud);

enum class SupervisorMode { kFollowTrajectory = 0, kApfActive = 1 };

struct SupervisorState {
  SupervisorMode mode = SupervisorMode::kFollowTrajectory;
  double t_activation = 0.0;  // t_k of the current or last activation
  double t_in_apf = 0.0;      // t_o; zero while following
  double last_heading = 0.0;
};

struct SupervisorOutput {
  UavState reference;
  SupervisorState state;
  ForceField field;
};

// One control tick of the trajectory-following / avoidance switch.
//
// Following: the reference is the planned state at t_now.
// Avoiding (F_t >= F_threshold): the reference is offset from the current
// position by step_gain * F, scaled down along its own direction until no
// axis exceeds v_max * dt, and yaw is held.
// The plan clock never pauses, so leaving avoidance after t_o seconds resumes
// at the planned state x(t_k + t_o).
SupervisorOutput SupervisorStep(const UavState& state,
                                const PlannedTrajectory& traj,
                                std::span<const Cluster> clusters,
                                double t_now, const SupervisorState& sup,
                                const ApfParams& params, double dt,
                                const PointCloud* cloud = nullptr);

}  // namespace apf_nav

#endif  // APF_NAV_APF_H_
