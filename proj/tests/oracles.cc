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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "Eigen/Dense"

namespace apf_nav::oracle {
namespace {

constexpr double kFaceSlack = 1e-12;

std::optional<double> BoxHit(const AxisAlignedBox& box, const Vec3& o,
                             const Vec3& dir) {
  std::optional<double> best;
  for (int axis = 0; axis < 3; ++axis) {
    if (dir[axis] == 0.0) continue;
    for (double plane : {box.min[axis], box.max[axis]}) {
      const double t = (plane - o[axis]) / dir[axis];
      if (t < 0.0) continue;
      const Vec3 p = o + t * dir;
      bool on_face = true;
      for (int k = 0; k < 3; ++k) {
        if (k == axis) continue;
        if (p[k] < box.min[k] - kFaceSlack || p[k] > box.max[k] + kFaceSlack) {
          on_face = false;
        }
      }
      if (on_face && (!best || t < *best)) best = t;
    }
  }
  return best;
}

std::optional<double> CylinderHit(const VerticalCylinder& cyl, const Vec3& o,
                                  const Vec3& dir) {
  std::optional<double> best;
  const auto consider = [&](double t) {
    if (t >= 0.0 && (!best || t < *best)) best = t;
  };
  // Lateral surface: |o_xy + t dir_xy - c|^2 = r^2.
  const double ox = o.x() - cyl.center_xy.x();
  const double oy = o.y() - cyl.center_xy.y();
  const double qa = dir.x() * dir.x() + dir.y() * dir.y();
  if (qa > 0.0) {
    const double qb = 2.0 * (ox * dir.x() + oy * dir.y());
    const double qc = ox * ox + oy * oy - cyl.radius * cyl.radius;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      for (double sign : {-1.0, 1.0}) {
        const double t = (-qb + sign * std::sqrt(disc)) / (2.0 * qa);
        const double z = o.z() + t * dir.z();
        if (z >= cyl.z_min - kFaceSlack && z <= cyl.z_max + kFaceSlack) {
          consider(t);
        }
      }
    }
  }
  // Caps.
  if (dir.z() != 0.0) {
    for (double plane : {cyl.z_min, cyl.z_max}) {
      const double t = (plane - o.z()) / dir.z();
      const double px = ox + t * dir.x();
      const double py = oy + t * dir.y();
      if (px * px + py * py <= cyl.radius * cyl.radius + kFaceSlack) {
        consider(t);
      }
    }
  }
  return best;
}

// One constant-snap step written out as Taylor sums.
AxisState Propagate(const AxisState& x, double u, double dt) {
  const double pw[5] = {1.0, dt, dt * dt, dt * dt * dt, dt * dt * dt * dt};
  const double f[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
  AxisState out;
  const double chain[5] = {x[0], x[1], x[2], x[3], u};
  for (int row = 0; row < 4; ++row) {
    double s = 0.0;
    for (int k = row; k < 5; ++k) s += chain[k] * pw[k - row] / f[k - row];
    out[row] = s;
  }
  return out;
}

struct Stacked {
  // Affine map u -> stacked states: X = base + sens * u.
  Eigen::VectorXd base;
  Eigen::MatrixXd sens;
};

Stacked StackPredictions(const AxisState& x0, int n, double dt) {
  Stacked s;
  s.base.resize(4 * n);
  s.sens = Eigen::MatrixXd::Zero(4 * n, n);
  AxisState x = x0;
  for (int k = 0; k < n; ++k) {
    x = Propagate(x, 0.0, dt);
    s.base.segment<4>(4 * k) = x;
  }
  for (int j = 0; j < n; ++j) {
    // Response to a unit input at step j, with zero initial state.
    AxisState y = AxisState::Zero();
    for (int k = 0; k < n; ++k) {
      y = Propagate(y, k == j ? 1.0 : 0.0, dt);
      s.sens.block<4, 1>(4 * k, j) = y;
    }
  }
  return s;
}

}  // namespace

std::optional<double> RayHit(const Primitive& primitive, const Vec3& origin,
                             const Vec3& direction) {
  if (const auto* box = std::get_if<AxisAlignedBox>(&primitive)) {
    return BoxHit(*box, origin, direction);
  }
  return CylinderHit(std::get<VerticalCylinder>(primitive), origin, direction);
}

std::optional<double> SceneRayHit(const Scene& scene, const Vec3& origin,
                                  const Vec3& direction, double range) {
  std::optional<double> best;
  for (const Primitive& p : scene.obstacles) {
    const auto t = RayHit(p, origin, direction);
    if (t && *t <= range && (!best || *t < *best)) best = t;
  }
  return best;
}

Partition UnionFindClusters(const PointCloud& cloud, double tolerance,
                            std::size_t min_size) {
  const std::size_t n = cloud.points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((cloud.points[i] - cloud.points[j]).norm() <= tolerance) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::map<std::size_t, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].insert(i);
  Partition out;
  for (auto& [root, members] : groups) {
    if (members.size() >= min_size) out.insert(members);
  }
  return out;
}

Partition AsPartition(const std::vector<Cluster>& clusters) {
  Partition out;
  for (const Cluster& c : clusters) {
    out.insert(std::set<std::size_t>(c.point_indices.begin(),
                                     c.point_indices.end()));
  }
  return out;
}

DenseAxisProblem BuildDenseAxisProblem(const AxisState& x0,
                                       const std::vector<AxisState>& refs,
                                       double dt,
                                       const Eigen::Vector4d& q_diag,
                                       double p, const AxisBounds& bounds) {
  const int n = static_cast<int>(refs.size());
  const Stacked s = StackPredictions(x0, n, dt);
  Eigen::VectorXd r(4 * n);
  for (int k = 0; k < n; ++k) r.segment<4>(4 * k) = refs[k];
  const Eigen::VectorXd w = q_diag.replicate(n, 1);
  const Eigen::VectorXd e0 = s.base - r;

  DenseAxisProblem qp;
  qp.h = 2.0 * s.sens.transpose() * w.asDiagonal() * s.sens;
  qp.h.diagonal().array() += 2.0 * p;
  qp.g = 2.0 * s.sens.transpose() * w.cwiseProduct(e0);
  qp.c0 = e0.dot(w.cwiseProduct(e0));

  // Rows come in (upper, lower) pairs: inputs first, then v, a, j per step.
  const int m = 2 * n + 6 * n;
  qp.c = Eigen::MatrixXd::Zero(m, n);
  qp.d.resize(m);
  int row = 0;
  for (int j = 0; j < n; ++j) {
    qp.c(row, j) = 1.0;
    qp.d[row++] = bounds.u;
    qp.c(row, j) = -1.0;
    qp.d[row++] = bounds.u;
  }
  const double caps[4] = {0.0, bounds.v, bounds.a, bounds.j};
  for (int k = 0; k < n; ++k) {
    for (int comp = 1; comp < 4; ++comp) {
      const int idx = 4 * k + comp;
      qp.c.row(row) = s.sens.row(idx);
      qp.d[row++] = caps[comp] - s.base[idx];
      qp.c.row(row) = -s.sens.row(idx);
      qp.d[row++] = caps[comp] + s.base[idx];
    }
  }
  return qp;
}

std::optional<Eigen::VectorXd> EnumerateActiveSets(
    const DenseAxisProblem& qp) {
  const int n = static_cast<int>(qp.h.rows());
  const int m = static_cast<int>(qp.c.rows());
  const int pairs = m / 2;
  constexpr double kFeasTol = 1e-9;
  constexpr double kDualTol = -1e-9;

  std::vector<int> rows;
  std::optional<Eigen::VectorXd> found;
  // Depth-first over pair indices in increasing order; each chosen pair
  // contributes its upper or its lower row.
  const auto try_set = [&]() -> bool {
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd rhs(n + k);
    kkt.topLeftCorner(n, n) = qp.h;
    rhs.head(n) = -qp.g;
    for (int i = 0; i < k; ++i) {
      kkt.block(0, n + i, n, 1) = qp.c.row(rows[i]).transpose();
      kkt.block(n + i, 0, 1, n) = qp.c.row(rows[i]);
      rhs[n + i] = qp.d[rows[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (lu.rank() < n + k) return false;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(n);
    for (int i = 0; i < k; ++i) {
      if (sol[n + i] < kDualTol) return false;
    }
    const Eigen::VectorXd slack = qp.d - qp.c * x;
    for (int r = 0; r < m; ++r) {
      if (slack[r] < -kFeasTol * (1.0 + std::abs(qp.d[r]))) return false;
    }
    found = x;
    return true;
  };

  for (int size = 0; size <= std::min(n, pairs); ++size) {
    // Recursive enumeration of `size` pairs with signs.
    std::vector<int> chosen;
    const auto recurse = [&](auto&& self, int start) -> bool {
      if (static_cast<int>(chosen.size()) == size) {
        const int combos = 1 << size;
        for (int mask = 0; mask < combos; ++mask) {
          rows.clear();
          for (int i = 0; i < size; ++i) {
            rows.push_back(2 * chosen[i] + ((mask >> i) & 1));
          }
          if (try_set()) return true;
        }
        return false;
      }
      for (int pidx = start; pidx < pairs; ++pidx) {
        chosen.push_back(pidx);
        if (self(self, pidx + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    if (recurse(recurse, 0)) return found;
  }
  return std::nullopt;
}

Eigen::VectorXd BatchLeastSquares(const AxisState& x0,
                                  const std::vector<AxisState>& refs,
                                  double dt, const Eigen::Vector4d& q_diag,
                                  double p) {
  const int n = static_cast<int>(refs.size());
  const Stacked s = StackPredictions(x0, n, dt);
  Eigen::VectorXd r(4 * n);
  for (int k = 0; k < n; ++k) r.segment<4>(4 * k) = refs[k];
  const Eigen::VectorXd sqrt_w = q_diag.replicate(n, 1).cwiseSqrt();

  Eigen::MatrixXd a(5 * n, n);
  Eigen::VectorXd b(5 * n);
  a.topRows(4 * n) = sqrt_w.asDiagonal() * s.sens;
  b.head(4 * n) = sqrt_w.cwiseProduct(r - s.base);
  a.bottomRows(n) = std::sqrt(p) * Eigen::MatrixXd::Identity(n, n);
  b.tail(n).setZero();
  return a.colPivHouseholderQr().solve(b);
}

}  // namespace apf_nav::oracle
