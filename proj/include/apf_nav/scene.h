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

#ifndef APF_NAV_SCENE_H_
#define APF_NAV_SCENE_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "Eigen/Core"

namespace apf_nav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

struct AxisAlignedBox {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

// Cylinder with its axis parallel to world z.
struct VerticalCylinder {
  Vec2 center_xy = Vec2::Zero();
  double radius = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;
};

using Primitive = std::variant<AxisAlignedBox, VerticalCylinder>;

struct Scene {
  std::vector<Primitive> obstacles;
  AxisAlignedBox world_bounds;
};

// Parametric distance along `direction` (unit length) to the nearest
// intersection with the primitive surface in front of `origin`. Rays that
// start inside a primitive report the exit point.
std::optional<double> IntersectRay(const Primitive& primitive,
                                   const Vec3& origin, const Vec3& direction);

// Euclidean distance from `point` to the primitive surface; zero when the
// point is inside the solid.
double SurfaceDistance(const Primitive& primitive, const Vec3& point);

// Minimum SurfaceDistance over all obstacles; +inf for an empty scene.
double Clearance(const Scene& scene, const Vec3& point);

bool Contains(const AxisAlignedBox& box, const Vec3& point);

// Returns one message per violated invariant, prefixed with `path`.
std::vector<std::string> ValidateScene(const Scene& scene,
                                       const std::string& path = "scene");

}  // namespace apf_nav

#endif  // APF_NAV_SCENE_H_
