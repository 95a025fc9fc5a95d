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

#ifndef APF_NAV_TRAJECTORY_H_
#define APF_NAV_TRAJECTORY_H_

#include <span>
#include <string>
#include <vector>

#include "apf_nav/scene.h"

namespace apf_nav {

struct UavState {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;  // [-pi, pi)
  Vec3 velocity = Vec3::Zero();
  double yaw_rate = 0.0;
};

struct DynamicLimits {
  Vec3 v_max = Vec3::Constant(2.0);
  Vec3 a_max = Vec3::Constant(1.0);
  double yaw_rate_max = 1.0;
  double yaw_acc_max = 2.0;
};

std::vector<std::string> ValidateLimits(const DynamicLimits& limits,
                                        const std::string& path = "limits");

struct Knot {
  double t = 0.0;
  UavState state;
  // Acceleration on [t, t + dt_knot); zero on the final knot.
  Vec3 acceleration = Vec3::Zero();
};

// Wraps an angle into [-pi, pi).
double WrapAngle(double angle);

// Time-parametrized piecewise-linear path. Every waypoint is visited at rest
// and every segment follows a trapezoidal (or triangular) speed profile whose
// phase boundaries fall on knot times, so waypoints coincide with knots.
class PlannedTrajectory {
 public:
  // Throws std::invalid_argument for fewer than two waypoints, coincident
  // consecutive waypoints, invalid limits or a non-positive dt_knot.
  static PlannedTrajectory Plan(std::span<const Vec3> waypoints,
                                const DynamicLimits& limits,
                                double dt_knot = 0.01);

  // Linear interpolation between bracketing knots. Times past the end hold
  // the final knot with zero velocity.
  UavState Sample(double t) const;

  // Planar direction of travel at t; falls back to the most recent segment
  // with a well-defined planar direction when the sampled speed vanishes.
  double Heading(double t) const;

  double dt_knot() const { return dt_knot_; }
  double duration() const { return knots_.back().t; }
  const std::vector<Knot>& knots() const { return knots_; }
  const std::vector<Vec3>& waypoints() const { return waypoints_; }
  const DynamicLimits& limits() const { return limits_; }
  // Start time of each segment, plus the end time as the last entry.
  const std::vector<double>& segment_times() const { return segment_times_; }
  double PathLength() const;

  // Closest point on the geometric path: distance to it and its arc length.
  struct Projection {
    double distance = 0.0;
    double arc_length = 0.0;
  };
  Projection Project(const Vec3& point) const;

 private:
  PlannedTrajectory() = default;

  int SegmentAt(double t) const;

  double dt_knot_ = 0.01;
  DynamicLimits limits_;
  std::vector<Vec3> waypoints_;
  std::vector<double> segment_times_;
  // Planar heading of each segment, inherited from the previous segment for
  // purely vertical ones.
  std::vector<double> segment_headings_;
  std::vector<Knot> knots_;
};

}  // namespace apf_nav

#endif  // APF_NAV_TRAJECTORY_H_
