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

#include "apf_nav/scene.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apf_nav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Slab test. Returns the entry parameter when the origin is outside, the exit
// parameter when inside.
std::optional<double> IntersectBox(const AxisAlignedBox& box,
                                   const Vec3& origin, const Vec3& dir) {
  double t_near = -kInf;
  double t_far = kInf;
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) {
      if (origin[i] < box.min[i] || origin[i] > box.max[i]) {
        return std::nullopt;
      }
      continue;
    }
    const double inv = 1.0 / dir[i];
    double t0 = (box.min[i] - origin[i]) * inv;
    double t1 = (box.max[i] - origin[i]) * inv;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_far < 0.0) return std::nullopt;
  return t_near >= 0.0 ? t_near : t_far;
}

std::optional<double> IntersectCylinder(const VerticalCylinder& cyl,
                                        const Vec3& origin, const Vec3& dir) {
  double best = kInf;
  const auto inside_height = [&](double t) {
    const double z = origin.z() + t * dir.z();
    return z >= cyl.z_min && z <= cyl.z_max;
  };
  const auto inside_disk = [&](double t) {
    const double x = origin.x() + t * dir.x() - cyl.center_xy.x();
    const double y = origin.y() + t * dir.y() - cyl.center_xy.y();
    return x * x + y * y <= cyl.radius * cyl.radius;
  };

  // Lateral surface: |o_xy + t d_xy - c|^2 = r^2.
  const double ox = origin.x() - cyl.center_xy.x();
  const double oy = origin.y() - cyl.center_xy.y();
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  if (a > 0.0) {
    const double b = ox * dir.x() + oy * dir.y();
    const double c = ox * ox + oy * oy - cyl.radius * cyl.radius;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Numerically stable root pair.
      const double qq = -(b + std::copysign(sq, b));
      double roots[2] = {qq / a, qq != 0.0 ? c / qq : qq / a};
      for (double t : roots) {
        if (t >= 0.0 && t < best && inside_height(t)) best = t;
      }
    }
  }
  // Caps.
  if (dir.z() != 0.0) {
    for (double z_cap : {cyl.z_min, cyl.z_max}) {
      const double t = (z_cap - origin.z()) / dir.z();
      if (t >= 0.0 && t < best && inside_disk(t)) best = t;
    }
  }
  if (best == kInf) return std::nullopt;
  return best;
}

double BoxDistance(const AxisAlignedBox& box, const Vec3& p) {
  const Vec3 outside =
      (box.min - p).cwiseMax(p - box.max).cwiseMax(Vec3::Zero());
  return outside.norm();
}

double CylinderDistance(const VerticalCylinder& cyl, const Vec3& p) {
  const double radial =
      std::max(0.0, (p.head<2>() - cyl.center_xy).norm() - cyl.radius);
  const double vertical =
      std::max({0.0, cyl.z_min - p.z(), p.z() - cyl.z_max});
  return std::hypot(radial, vertical);
}

}  // namespace

std::optional<double> IntersectRay(const Primitive& primitive,
                                   const Vec3& origin, const Vec3& direction) {
  return std::visit(
      [&](const auto& prim) -> std::optional<double> {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, AxisAlignedBox>) {
          return IntersectBox(prim, origin, direction);
        } else {
          return IntersectCylinder(prim, origin, direction);
        }
      },
      primitive);
}

double SurfaceDistance(const Primitive& primitive, const Vec3& point) {
  return std::visit(
      [&](const auto& prim) {
        using T = std::decay_t<decltype(prim)>;
        if constexpr (std::is_same_v<T, AxisAlignedBox>) {
          return BoxDistance(prim, point);
        } else {
          return CylinderDistance(prim, point);
        }
      },
      primitive);
}

double Clearance(const Scene& scene, const Vec3& point) {
  double best = kInf;
  for (const Primitive& prim : scene.obstacles) {
    best = std::min(best, SurfaceDistance(prim, point));
  }
  return best;
}

bool Contains(const AxisAlignedBox& box, const Vec3& point) {
  return (point.array() >= box.min.array()).all() &&
         (point.array() <= box.max.array()).all();
}

std::vector<std::string> ValidateScene(const Scene& scene,
                                       const std::string& path) {
  std::vector<std::string> errors;
  const AxisAlignedBox& world = scene.world_bounds;
  if (!world.min.allFinite() || !world.max.allFinite() ||
      !(world.min.array() < world.max.array()).all()) {
    errors.push_back(path + ".world_bounds: min must be < max componentwise");
  }
  for (size_t i = 0; i < scene.obstacles.size(); ++i) {
    const std::string p = path + ".obstacles[" + std::to_string(i) + "]";
    std::visit(
        [&](const auto& prim) {
          using T = std::decay_t<decltype(prim)>;
          if constexpr (std::is_same_v<T, AxisAlignedBox>) {
            if (!prim.min.allFinite() || !prim.max.allFinite() ||
                !(prim.min.array() < prim.max.array()).all()) {
              errors.push_back(p + ": box min must be < max componentwise");
            } else if (!Contains(world, prim.min) ||
                       !Contains(world, prim.max)) {
              errors.push_back(p + ": box outside world_bounds");
            }
          } else {
            if (!(prim.radius > 0.0) || !std::isfinite(prim.radius)) {
              errors.push_back(p + ".radius: must be > 0");
            }
            if (!(prim.z_min < prim.z_max)) {
              errors.push_back(p + ": z_min must be < z_max");
            }
            const Vec3 lo(prim.center_xy.x() - prim.radius,
                          prim.center_xy.y() - prim.radius, prim.z_min);
            const Vec3 hi(prim.center_xy.x() + prim.radius,
                          prim.center_xy.y() + prim.radius, prim.z_max);
            if (!Contains(world, lo) || !Contains(world, hi)) {
              errors.push_back(p + ": cylinder outside world_bounds");
            }
          }
        },
        scene.obstacles[i]);
  }
  return errors;
}

}  // namespace apf_nav
