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

#include "apf_nav/apf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace apf_nav {
namespace {

// Offset from the obstacle and its length after applying the d_min clamp.
struct ClampedOffset {
  Vec3 offset = Vec3::Zero();
  double distance = 0.0;
  bool clamped = false;
  bool coincident = false;
};

ClampedOffset MakeOffset(const Vec3& q, const Vec3& q_o, double d_min) {
  ClampedOffset out;
  out.offset = q - q_o;
  out.distance = out.offset.norm();
  if (out.distance == 0.0) {
    out.coincident = true;
    out.distance = d_min;
    out.clamped = true;
    return out;
  }
  if (out.distance < d_min) {
    out.offset *= d_min / out.distance;
    out.distance = d_min;
    out.clamped = true;
  }
  return out;
}

// k * (1/d - 1/d_0) / d^3, the common scale of both force components.
double ForceScale(double gain, double d, double d_0) {
  return gain * (1.0 / d - 1.0 / d_0) / (d * d * d);
}

}  // namespace

std::vector<std::string> ValidateApfParams(const ApfParams& params,
                                           const std::string& path) {
  std::vector<std::string> errors;
  if (!(params.k_rt >= 0.0) || !std::isfinite(params.k_rt)) {
    errors.push_back(path + ".k_rt: must be >= 0");
  }
  if (!(params.k_rr >= 0.0) || !std::isfinite(params.k_rr)) {
    errors.push_back(path + ".k_rr: must be >= 0");
  }
  if (!(params.d_0 > 0.0) || !std::isfinite(params.d_0)) {
    errors.push_back(path + ".d_0: must be > 0");
  }
  if (!(params.f_threshold > 0.0)) {
    errors.push_back(path + ".F_threshold: must be > 0");
  }
  if (!(params.step_gain > 0.0)) {
    errors.push_back(path + ".step_gain: must be > 0");
  }
  if (!(params.d_min > 0.0)) {
    errors.push_back(path + ".d_min: must be > 0");
  }
  return errors;
}

PotentialValue RepulsivePotential(const Vec3& q, const Vec3& q_o,
                                  const ApfParams& params) {
  const ClampedOffset off = MakeOffset(q, q_o, params.d_min);
  PotentialValue out;
  out.flags.distance_clamped = off.clamped;
  if (off.distance > params.d_0) return out;
  const double inv = 1.0 / off.distance - 1.0 / params.d_0;
  out.value = 0.5 * params.k_rt * inv * inv;
  return out;
}

ForceValue TranslationalForce(const Vec3& q, const Vec3& q_o,
                              const ApfParams& params) {
  const ClampedOffset off = MakeOffset(q, q_o, params.d_min);
  ForceValue out;
  out.flags.distance_clamped = off.clamped;
  if (off.distance > params.d_0 || off.coincident) return out;
  out.force = ForceScale(params.k_rt, off.distance, params.d_0) * off.offset;
  return out;
}

Eigen::Matrix2d RotationDirection(double phi, double rho) {
  const double theta = WrapAngle(phi - rho);
  Eigen::Matrix2d r;
  if (theta >= 0.0) {
    r << 0.0, 1.0, -1.0, 0.0;
  } else {
    r << 0.0, -1.0, 1.0, 0.0;
  }
  return r;
}

ForceValue RotationalForce(const Vec3& q, const Vec3& q_o, double phi,
                           const ApfParams& params) {
  const ClampedOffset off = MakeOffset(q, q_o, params.d_min);
  ForceValue out;
  out.flags.distance_clamped = off.clamped;
  if (off.distance > params.d_0) return out;
  const Vec2 planar = off.offset.head<2>();
  if (off.coincident || (planar.x() == 0.0 && planar.y() == 0.0)) {
    out.flags.planar_degenerate = true;
    return out;
  }
  const double rho = std::atan2(q_o.y() - q.y(), q_o.x() - q.x());
  const Vec2 f = ForceScale(params.k_rr, off.distance, params.d_0) *
                 (RotationDirection(phi, rho) * planar);
  out.force = Vec3(f.x(), f.y(), 0.0);
  return out;
}

std::vector<Vec3> ObstacleReferences(const Vec3& q,
                                     std::span<const Cluster> clusters,
                                     ObstacleReference mode,
                                     const PointCloud* cloud) {
  std::vector<Vec3> refs;
  refs.reserve(clusters.size());
  for (const Cluster& c : clusters) {
    if (mode == ObstacleReference::kCentroid) {
      refs.push_back(c.centroid);
      continue;
    }
    if (cloud == nullptr) {
      throw std::invalid_argument(
          "ObstacleReferences: nearest-point mode needs the source cloud");
    }
    double best = std::numeric_limits<double>::infinity();
    Vec3 nearest = c.centroid;
    for (std::size_t i : c.point_indices) {
      const double d = (cloud->points.at(i) - q).squaredNorm();
      if (d < best) {
        best = d;
        nearest = cloud->points[i];
      }
    }
    refs.push_back(nearest);
  }
  return refs;
}

ForceField TotalForce(const Vec3& q, std::span<const Vec3> obstacles,
                      double phi, const ApfParams& params) {
  ForceField field;
  field.per_cluster.reserve(obstacles.size());
  for (size_t i = 0; i < obstacles.size(); ++i) {
    const Vec3& q_o = obstacles[i];
    ClusterForce cf;
    cf.cluster_id = static_cast<int>(i);
    cf.obstacle = q_o;
    cf.distance = (q - q_o).norm();
    cf.theta = WrapAngle(phi - std::atan2(q_o.y() - q.y(), q_o.x() - q.x()));
    const ForceValue rt = TranslationalForce(q, q_o, params);
    const ForceValue rr = RotationalForce(q, q_o, phi, params);
    cf.f_rt = rt.force;
    cf.f_rr = rr.force;
    cf.f_r = cf.f_rt + cf.f_rr;
    field.flags |= rt.flags;
    field.flags |= rr.flags;
    field.f_total_translational += cf.f_rt;
    field.f_total_modified += cf.f_r;
    field.per_cluster.push_back(cf);
  }
  field.f_t_magnitude = field.f_total_translational.norm();
  return field;
}

ForceField TotalForce(const Vec3& q, std::span<const Cluster> clusters,
                      double phi, const ApfParams& params,
                      const PointCloud* cloud) {
  const std::vector<Vec3> refs =
      ObstacleReferences(q, clusters, params.obstacle_reference, cloud);
  return TotalForce(q, std::span<const Vec3>(refs), phi, params);
}

SupervisorOutput SupervisorStep(const UavState& state,
                                const PlannedTrajectory& traj,
                                std::span<const Cluster> clusters,
                                double t_now, const SupervisorState& sup,
                                const ApfParams& params, double dt,
                                const PointCloud* cloud) {
  if (!(dt > 0.0)) throw std::invalid_argument("SupervisorStep: dt <= 0");
  SupervisorOutput out;
  const double phi = traj.Heading(t_now);
  out.field = TotalForce(state.position, clusters, phi, params, cloud);
  out.state = sup;
  out.state.last_heading = phi;

  if (out.field.f_t_magnitude < params.f_threshold) {
    out.state.mode = SupervisorMode::kFollowTrajectory;
    out.state.t_in_apf = 0.0;
    out.reference = traj.Sample(t_now);
    return out;
  }

  if (sup.mode != SupervisorMode::kApfActive) {
    out.state.t_activation = t_now;
    out.state.t_in_apf = 0.0;
  }
  out.state.mode = SupervisorMode::kApfActive;
  out.state.t_in_apf += dt;

  // Uniform scaling keeps the step parallel to the force while holding every
  // axis within its velocity limit.
  const Vec3 max_step = traj.limits().v_max * dt;
  Vec3 step = params.step_gain * out.field.f_total_modified;
  const double excess = (step.cwiseAbs().array() / max_step.array()).maxCoeff();
  if (excess > 1.0) step /= excess;
  out.reference.position = state.position + step;
  out.reference.velocity = step / dt;
  out.reference.yaw = state.yaw;
  out.reference.yaw_rate = 0.0;
  return out;
}

}  // namespace apf_nav
