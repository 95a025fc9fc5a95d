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

#ifndef APF_NAV_TESTS_ORACLES_H_
#define APF_NAV_TESTS_ORACLES_H_

#include <optional>
#include <set>
#include <vector>

#include "Eigen/Core"
#include "apf_nav/mpc_tracker.h"
#include "apf_nav/pointcloud.h"
#include "apf_nav/scene.h"

namespace apf_nav::oracle {

// Ray/primitive intersection by testing every face plane (boxes) or the
// lateral quadratic plus both cap planes (cylinders) and keeping the smallest
// admissible parameter. Shares no code with the library intersector.
std::optional<double> RayHit(const Primitive& primitive, const Vec3& origin,
                             const Vec3& direction);

// Nearest hit over all obstacles within range.
std::optional<double> SceneRayHit(const Scene& scene, const Vec3& origin,
                                  const Vec3& direction, double range);

using Partition = std::set<std::set<std::size_t>>;

// Connected components of the full pairwise graph (d <= tolerance) via
// union-find, dropping components below min_size.
Partition UnionFindClusters(const PointCloud& cloud, double tolerance,
                            std::size_t min_size);

Partition AsPartition(const std::vector<Cluster>& clusters);

// Single-axis MPC problem assembled from scratch: predictions come from
// propagating unit inputs through the model, the objective is
// 0.5 u'Hu + g'u + c0 with H, g, c0 matching sum e'Qe + P u^2.
struct DenseAxisProblem {
  Eigen::MatrixXd h;
  Eigen::VectorXd g;
  double c0 = 0.0;
  Eigen::MatrixXd c;  // C u <= d
  Eigen::VectorXd d;

  double Cost(const Eigen::VectorXd& u) const {
    return 0.5 * u.dot(h * u) + g.dot(u) + c0;
  }
};

DenseAxisProblem BuildDenseAxisProblem(const AxisState& x0,
                                       const std::vector<AxisState>& refs,
                                       double dt,
                                       const Eigen::Vector4d& q_diag,
                                       double p, const AxisBounds& bounds);

// Exact optimum of a small strictly convex QP by enumerating candidate active
// sets in order of size and returning the first KKT point. Sign-paired rows
// (upper and lower bound of one quantity) are never active together.
std::optional<Eigen::VectorXd> EnumerateActiveSets(const DenseAxisProblem& qp);

// Unconstrained minimizer as a stacked weighted least-squares problem.
Eigen::VectorXd BatchLeastSquares(const AxisState& x0,
                                  const std::vector<AxisState>& refs,
                                  double dt, const Eigen::Vector4d& q_diag,
                                  double p);

}  // namespace apf_nav::oracle

#endif  // APF_NAV_TESTS_ORACLES_H_
