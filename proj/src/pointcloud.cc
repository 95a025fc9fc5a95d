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

#include "apf_nav/pointcloud.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace apf_nav {
namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : {k.x, k.y, k.z}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

CellKey KeyFor(const Eigen::Vector3d& p, double cell) {
  return {static_cast<std::int64_t>(std::floor(p.x() / cell)),
          static_cast<std::int64_t>(std::floor(p.y() / cell)),
          static_cast<std::int64_t>(std::floor(p.z() / cell))};
}

}  // namespace

Eigen::Vector3d Centroid(std::span<const std::size_t> point_indices,
                         const PointCloud& cloud) {
  if (point_indices.empty()) {
    throw std::invalid_argument("Centroid: empty cluster");
  }
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (std::size_t i : point_indices) sum += cloud.points.at(i);
  return sum / static_cast<double>(point_indices.size());
}

std::vector<Cluster> EuclideanCluster(const PointCloud& cloud,
                                      double cluster_tolerance,
                                      std::size_t min_cluster_size) {
  if (!(cluster_tolerance > 0.0)) {
    throw std::invalid_argument("EuclideanCluster: tolerance must be > 0");
  }
  if (min_cluster_size < 1) {
    throw std::invalid_argument("EuclideanCluster: min_cluster_size >= 1");
  }
  const std::size_t n = cloud.points.size();
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid;
  grid.reserve(n);
  std::vector<CellKey> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = KeyFor(cloud.points[i], cluster_tolerance);
    grid[keys[i]].push_back(i);
  }

  const double tol_sq = cluster_tolerance * cluster_tolerance;
  std::vector<bool> visited(n, false);
  std::vector<Cluster> clusters;
  std::vector<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    visited[seed] = true;
    std::vector<std::size_t> members{seed};
    frontier.assign(1, seed);
    while (!frontier.empty()) {
      const std::size_t cur = frontier.back();
      frontier.pop_back();
      const Eigen::Vector3d& p = cloud.points[cur];
      const CellKey& k = keys[cur];
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            const auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
            if (it == grid.end()) continue;
            for (std::size_t j : it->second) {
              if (visited[j]) continue;
              if ((cloud.points[j] - p).squaredNorm() <= tol_sq) {
                visited[j] = true;
                members.push_back(j);
                frontier.push_back(j);
              }
            }
          }
        }
      }
    }
    if (members.size() < min_cluster_size) continue;
    std::sort(members.begin(), members.end());
    Cluster c;
    c.centroid = Centroid(members, cloud);
    c.point_indices = std::move(members);
    clusters.push_back(std::move(c));
  }
  return clusters;
}

}  // namespace apf_nav
