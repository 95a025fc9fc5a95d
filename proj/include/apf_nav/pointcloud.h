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

#ifndef APF_NAV_POINTCLOUD_H_
#define APF_NAV_POINTCLOUD_H_

#include <cstddef>
#include <span>
#include <vector>

#include "Eigen/Core"

namespace apf_nav {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;
};

// A connected group of cloud points. `point_indices` is sorted ascending and
// refers to the cloud the cluster was extracted from.
struct Cluster {
  std::vector<std::size_t> point_indices;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
};

// Arithmetic mean of the referenced points. Throws std::invalid_argument for
// an empty index list.
Eigen::Vector3d Centroid(std::span<const std::size_t> point_indices,
                         const PointCloud& cloud);

// Euclidean cluster extraction: clusters are the connected components of the
// graph that links every pair of points closer than or equal to
// `cluster_tolerance`. Components with fewer than `min_cluster_size` points
// are dropped. Output is ordered by smallest member index.
//
// Neighbors are found through a uniform voxel grid with cell size equal to the
// tolerance, so only the 27 surrounding cells are searched per point.
std::vector<Cluster> EuclideanCluster(const PointCloud& cloud,
                                      double cluster_tolerance,
                                      std::size_t min_cluster_size = 1);

}  // namespace apf_nav

#endif  // APF_NAV_POINTCLOUD_H_
