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

#include "apf_nav/lidar.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace apf_nav {

std::vector<std::string> ValidateLidar(const LidarModel& lidar,
                                       const std::string& path) {
  std::vector<std::string> errors;
  if (!(lidar.range_max > 0.0) || !std::isfinite(lidar.range_max)) {
    errors.push_back(path + ".range_max: must be > 0");
  }
  if (!(lidar.fov_h > 0.0 && lidar.fov_h <= 360.0)) {
    errors.push_back(path + ".fov_h: must be in (0, 360]");
  }
  if (!(lidar.fov_v > 0.0 && lidar.fov_v <= 360.0)) {
    errors.push_back(path + ".fov_v: must be in (0, 360]");
  }
  if (lidar.rays_h < 1) errors.push_back(path + ".rays_h: must be >= 1");
  if (lidar.channels_v < 1) {
    errors.push_back(path + ".channels_v: must be >= 1");
  }
  if (!lidar.mount_offset.allFinite()) {
    errors.push_back(path + ".mount_offset: must be finite");
  }
  if (!(lidar.range_noise_stddev >= 0.0)) {
    errors.push_back(path + ".range_noise_stddev: must be >= 0");
  }
  return errors;
}

std::vector<double> RayAzimuths(const LidarModel& lidar, double yaw) {
  const double fov = lidar.fov_h * std::numbers::pi / 180.0;
  const double step = fov / lidar.rays_h;
  std::vector<double> out(lidar.rays_h);
  for (int i = 0; i < lidar.rays_h; ++i) {
    out[i] = yaw - 0.5 * fov + (i + 0.5) * step;
  }
  return out;
}

std::vector<double> RayElevations(const LidarModel& lidar) {
  std::vector<double> out(lidar.channels_v, 0.0);
  if (lidar.channels_v == 1) return out;
  const double fov = lidar.fov_v * std::numbers::pi / 180.0;
  for (int i = 0; i < lidar.channels_v; ++i) {
    out[i] = -0.5 * fov + fov * i / (lidar.channels_v - 1);
  }
  return out;
}

PointCloud Raycast(const Scene& scene, const SensorPose& pose,
                   const LidarModel& lidar, std::uint64_t noise_seed) {
  PointCloud cloud;
  if (scene.obstacles.empty()) return cloud;

  const double c_yaw = std::cos(pose.yaw);
  const double s_yaw = std::sin(pose.yaw);
  const Vec3& m = lidar.mount_offset;
  const Vec3 origin =
      pose.position +
      Vec3(c_yaw * m.x() - s_yaw * m.y(), s_yaw * m.x() + c_yaw * m.y(), m.z());

  const std::vector<double> azimuths = RayAzimuths(lidar, pose.yaw);
  const std::vector<double> elevations = RayElevations(lidar);

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const bool noisy = lidar.range_noise_stddev > 0.0;

  for (double el : elevations) {
    const double c_el = std::cos(el);
    const double s_el = std::sin(el);
    for (double az : azimuths) {
      const Vec3 dir(c_el * std::cos(az), c_el * std::sin(az), s_el);
      double best = std::numeric_limits<double>::infinity();
      for (const Primitive& prim : scene.obstacles) {
        if (auto t = IntersectRay(prim, origin, dir); t && *t < best) {
          best = *t;
        }
      }
      if (best > lidar.range_max) continue;
      if (noisy) {
        best = std::clamp(best + lidar.range_noise_stddev * noise(rng), 0.0,
                          lidar.range_max);
      }
      cloud.points.push_back(origin + best * dir);
    }
  }
  return cloud;
}

}  // namespace apf_nav
