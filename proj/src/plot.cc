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

#include "apf_nav/plot.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace apf_nav {
namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;
constexpr const char* kTraceColors[] = {"#d62728", "#1f77b4", "#2ca02c",
                                        "#9467bd"};

struct Frame {
  double x0, y0, scale, height;

  double X(double x) const { return kMargin + (x - x0) * scale; }
  // SVG y grows downward.
  double Y(double y) const { return height - kMargin - (y - y0) * scale; }
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

void WritePathSvg(std::ostream& out, const ScenarioConfig& config,
                  std::span<const SimTrace> traces) {
  const AxisAlignedBox& world = config.scene.world_bounds;
  const double w = world.max.x() - world.min.x();
  const double h = world.max.y() - world.min.y();
  const double scale = (kCanvas - 2 * kMargin) / std::max(w, h);
  Frame f{world.min.x(), world.min.y(), scale, h * scale + 2 * kMargin};
  const double width = w * scale + 2 * kMargin;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Num(width)
      << "\" height=\"" << Num(f.height) << "\" viewBox=\"0 0 " << Num(width)
      << " " << Num(f.height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << Num(width) << "\" height=\""
      << Num(f.height) << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << Num(f.X(world.min.x())) << "\" y=\""
      << Num(f.Y(world.max.y())) << "\" width=\"" << Num(w * scale)
      << "\" height=\"" << Num(h * scale)
      << "\" fill=\"none\" stroke=\"#999\"/>\n";

  for (const Primitive& prim : config.scene.obstacles) {
    if (const auto* box = std::get_if<AxisAlignedBox>(&prim)) {
      out << "<rect x=\"" << Num(f.X(box->min.x())) << "\" y=\""
          << Num(f.Y(box->max.y())) << "\" width=\""
          << Num((box->max.x() - box->min.x()) * scale) << "\" height=\""
          << Num((box->max.y() - box->min.y()) * scale)
          << "\" fill=\"#ccc\" stroke=\"black\"/>\n";
    } else {
      const auto& cyl = std::get<VerticalCylinder>(prim);
      out << "<circle cx=\"" << Num(f.X(cyl.center_xy.x())) << "\" cy=\""
          << Num(f.Y(cyl.center_xy.y())) << "\" r=\""
          << Num(cyl.radius * scale)
          << "\" fill=\"#ccc\" stroke=\"black\"/>\n";
    }
  }

  out << "<polyline fill=\"none\" stroke=\"black\" stroke-dasharray=\"6,4\" "
         "points=\"";
  for (const Vec3& p : config.waypoints) {
    out << Num(f.X(p.x())) << "," << Num(f.Y(p.y())) << " ";
  }
  out << "\"/>\n";

  for (size_t i = 0; i < traces.size(); ++i) {
    const char* color = kTraceColors[i % std::size(kTraceColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    // Thin to roughly one vertex per 0.1 s.
    const size_t stride = std::max<size_t>(
        1, static_cast<size_t>(0.1 / std::max(traces[i].dt, 1e-6)));
    const auto& ticks = traces[i].ticks;
    for (size_t k = 0; k < ticks.size(); ++k) {
      if (k % stride != 0 && k + 1 != ticks.size()) continue;
      const Vec3& p = ticks[k].state.position;
      out << Num(f.X(p.x())) << "," << Num(f.Y(p.y())) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << Num(kMargin) << "\" y=\"" << Num(20.0 + 16.0 * i)
        << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"" << color
        << "\">" << ModeName(traces[i].mode) << "</text>\n";
  }
  const Vec3& start = config.waypoints.front();
  const Vec3& goal = config.waypoints.back();
  out << "<circle cx=\"" << Num(f.X(start.x())) << "\" cy=\""
      << Num(f.Y(start.y())) << "\" r=\"5\" fill=\"green\"/>\n";
  out << "<circle cx=\"" << Num(f.X(goal.x())) << "\" cy=\""
      << Num(f.Y(goal.y())) << "\" r=\"5\" fill=\"blue\"/>\n";
  out << "</svg>\n";
}

}  // namespace apf_nav
