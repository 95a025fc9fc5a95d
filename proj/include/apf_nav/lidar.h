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

#ifndef APF_NAV_LIDAR_H_
#define APF_NAV_LIDAR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "apf_nav/pointcloud.h"
#include "apf_nav/scene.h"

namespace apf_nav {

// Spinning range sensor. Defaults describe a VLP-16 class device.
struct LidarModel {
  double range_max = 100.0;  // m
  double fov_h = 360.0;      // deg, centered on the sensor yaw
  double fov_v = 30.0;       // deg, centered on the horizontal plane
  int rays_h = 360;
  int channels_v = 16;
  Vec3 mount_offset = Vec3::Zero();  // body frame
  // Standard deviation of additive range noise in meters. Zero disables it.
  double range_noise_stddev = 0.0;
};

struct SensorPose {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
};

std::vector<std::string> ValidateLidar(const LidarModel& lidar,
                                       const std::string& path = "lidar");

// Azimuths (rad, world frame) of the horizontal ray fan. Cells are uniform
// over fov_h and sampled at their centers, so a single ray points along yaw.
std::vector<double> RayAzimuths(const LidarModel& lidar, double yaw);

// Elevations (rad). Channels span fov_v endpoint to endpoint; a single
// channel is horizontal.
std::vector<double> RayElevations(const LidarModel& lidar);

// Casts every (elevation, azimuth) ray against the scene and keeps the nearest
// hit within range_max. Points are in the world frame, ordered
// elevation-major then azimuth. `noise_seed` only matters when range noise is
// enabled.
PointCloud Raycast(const Scene& scene, const SensorPose& pose,
                   const LidarModel& lidar, std::uint64_t noise_seed = 0);

}  // namespace apf_nav

#endif  // APF_NAV_LIDAR_H_
