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

#include "apf_nav/trajectory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace apf_nav {
namespace {

constexpr double kPlanarSpeedEps = 1e-6;
// Slack when rounding phase durations up to whole knot intervals.
constexpr double kRoundingSlack = 1e-9;

long CeilTicks(double duration, double dt) {
  return static_cast<long>(std::ceil(duration / dt - kRoundingSlack));
}

// Tightest scalar bound along `unit` that keeps every axis within `limit`.
double DirectionalLimit(const Vec3& unit, const Vec3& limit) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(unit[i]) > 0.0) {
      best = std::min(best, limit[i] / std::abs(unit[i]));
    }
  }
  return best;
}

// Rest-to-rest profile quantized to knot ticks.
struct SegmentProfile {
  long accel_ticks = 0;   // also the deceleration length
  long cruise_ticks = 0;
  double peak_speed = 0.0;
  double accel = 0.0;

  long total_ticks() const { return 2 * accel_ticks + cruise_ticks; }
};

SegmentProfile MakeProfile(double length, double v_lim, double a_lim,
                           double dt) {
  double ramp_time;
  double ramp_to_end;  // ideal time from end of acceleration to rest
  if (length >= v_lim * v_lim / a_lim) {
    ramp_time = v_lim / a_lim;
    ramp_to_end = length / v_lim;
  } else {
    ramp_time = std::sqrt(length / a_lim);
    ramp_to_end = ramp_time;
  }
  SegmentProfile p;
  p.accel_ticks = std::max(1L, CeilTicks(ramp_time, dt));
  const long rest_ticks =
      std::max(p.accel_ticks, CeilTicks(ramp_to_end, dt));
  p.cruise_ticks = rest_ticks - p.accel_ticks;
  // Rounding both phases up can only lower the speed and acceleration.
  p.peak_speed = length / (static_cast<double>(rest_ticks) * dt);
  p.accel = p.peak_speed / (static_cast<double>(p.accel_ticks) * dt);
  return p;
}

// Arc length, speed and acceleration `j` ticks into the segment.
void Evaluate(const SegmentProfile& p, double length, long j, double dt,
              double* s, double* v, double* a) {
  const double ta = p.accel_ticks * dt;
  const long total = p.total_ticks();
  if (j <= p.accel_ticks) {
    const double tau = j * dt;
    *s = 0.5 * p.accel * tau * tau;
    *v = p.accel * tau;
  } else if (j <= p.accel_ticks + p.cruise_ticks) {
    *s = 0.5 * p.accel * ta * ta + p.peak_speed * (j - p.accel_ticks) * dt;
    *v = p.peak_speed;
  } else {
    const double rem = (total - j) * dt;
    *s = length - 0.5 * p.accel * rem * rem;
    *v = p.accel * rem;
  }
  if (j < p.accel_ticks) {
    *a = p.accel;
  } else if (j < p.accel_ticks + p.cruise_ticks) {
    *a = 0.0;
  } else if (j < total) {
    *a = -p.accel;
  } else {
    *a = 0.0;
  }
}

}  // namespace

double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  if (w >= std::numbers::pi) w -= kTwoPi;
  return w;
}

std::vector<std::string> ValidateLimits(const DynamicLimits& limits,
                                        const std::string& path) {
  std::vector<std::string> errors;
  if (!limits.v_max.allFinite() || !(limits.v_max.array() > 0.0).all()) {
    errors.push_back(path + ".v_max: must be > 0");
  }
  if (!limits.a_max.allFinite() || !(limits.a_max.array() > 0.0).all()) {
    errors.push_back(path + ".a_max: must be > 0");
  }
  if (!(limits.yaw_rate_max > 0.0)) {
    errors.push_back(path + ".yaw_rate_max: must be > 0");
  }
  if (!(limits.yaw_acc_max > 0.0)) {
    errors.push_back(path + ".yaw_acc_max: must be > 0");
  }
  return errors;
}

PlannedTrajectory PlannedTrajectory::Plan(std::span<const Vec3> waypoints,
                                          const DynamicLimits& limits,
                                          double dt_knot) {
  if (waypoints.size() < 2) {
    throw std::invalid_argument("Plan: at least two waypoints are required");
  }
  if (!(dt_knot > 0.0)) {
    throw std::invalid_argument("Plan: dt_knot must be > 0");
  }
  if (!ValidateLimits(limits).empty()) {
    throw std::invalid_argument("Plan: invalid dynamic limits");
  }
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    if (!waypoints[i].allFinite() || !waypoints[i + 1].allFinite()) {
      throw std::invalid_argument("Plan: waypoints must be finite");
    }
    if ((waypoints[i + 1] - waypoints[i]).norm() == 0.0) {
      throw std::invalid_argument("Plan: consecutive waypoints coincide");
    }
  }

  PlannedTrajectory traj;
  traj.dt_knot_ = dt_knot;
  traj.limits_ = limits;
  traj.waypoints_.assign(waypoints.begin(), waypoints.end());

  const size_t num_segments = waypoints.size() - 1;
  std::vector<double> raw_headings(num_segments,
                                   std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 0; i < num_segments; ++i) {
    const Vec3 d = waypoints[i + 1] - waypoints[i];
    if (d.head<2>().norm() > kPlanarSpeedEps) {
      raw_headings[i] = std::atan2(d.y(), d.x());
    }
  }
  double carry = 0.0;
  for (double h : raw_headings) {
    if (!std::isnan(h)) {
      carry = h;
      break;
    }
  }
  traj.segment_headings_.resize(num_segments);
  for (size_t i = 0; i < num_segments; ++i) {
    if (!std::isnan(raw_headings[i])) carry = raw_headings[i];
    traj.segment_headings_[i] = carry;
  }

  long tick = 0;
  traj.segment_times_.push_back(0.0);
  for (size_t i = 0; i < num_segments; ++i) {
    const Vec3 delta = waypoints[i + 1] - waypoints[i];
    const double length = delta.norm();
    const Vec3 unit = delta / length;
    const SegmentProfile prof =
        MakeProfile(length, DirectionalLimit(unit, limits.v_max),
                    DirectionalLimit(unit, limits.a_max), dt_knot);
    const long total = prof.total_ticks();
    const bool last = i + 1 == num_segments;
    for (long j = 0; j < total + (last ? 1 : 0); ++j) {
      double s, v, a;
      Evaluate(prof, length, j, dt_knot, &s, &v, &a);
      Knot k;
      k.t = static_cast<double>(tick + j) * dt_knot;
      k.state.position = j == total ? waypoints[i + 1]
                         : j == 0   ? waypoints[i]
                                    : Vec3(waypoints[i] + s * unit);
      k.state.velocity = v * unit;
      k.acceleration = a * unit;
      traj.knots_.push_back(k);
    }
    tick += total;
    traj.segment_times_.push_back(static_cast<double>(tick) * dt_knot);
  }

  // Yaw tracks the segment heading, rate limited.
  const double max_step = limits.yaw_rate_max * dt_knot;
  double yaw = WrapAngle(traj.segment_headings_.front());
  size_t seg = 0;
  for (size_t k = 0; k < traj.knots_.size(); ++k) {
    while (seg + 1 < num_segments && traj.knots_[k].t >=
                                         traj.segment_times_[seg + 1]) {
      ++seg;
    }
    traj.knots_[k].state.yaw = yaw;
    const double step = std::clamp(
        WrapAngle(traj.segment_headings_[seg] - yaw), -max_step, max_step);
    traj.knots_[k].state.yaw_rate =
        k + 1 < traj.knots_.size() ? step / dt_knot : 0.0;
    yaw = WrapAngle(yaw + step);
  }
  return traj;
}

UavState PlannedTrajectory::Sample(double t) const {
  if (t <= 0.0) return knots_.front().state;
  const double idx = t / dt_knot_;
  const size_t k = static_cast<size_t>(std::floor(idx));
  if (k + 1 >= knots_.size()) {
    UavState s = knots_.back().state;
    s.velocity.setZero();
    s.yaw_rate = 0.0;
    return s;
  }
  const double alpha = idx - static_cast<double>(k);
  const UavState& a = knots_[k].state;
  const UavState& b = knots_[k + 1].state;
  UavState out;
  out.position = a.position + alpha * (b.position - a.position);
  out.velocity = a.velocity + alpha * (b.velocity - a.velocity);
  out.yaw = WrapAngle(a.yaw + alpha * WrapAngle(b.yaw - a.yaw));
  out.yaw_rate = a.yaw_rate + alpha * (b.yaw_rate - a.yaw_rate);
  return out;
}

int PlannedTrajectory::SegmentAt(double t) const {
  const int num_segments = static_cast<int>(segment_headings_.size());
  for (int i = num_segments - 1; i > 0; --i) {
    if (t > segment_times_[i]) return i;
  }
  return 0;
}

double PlannedTrajectory::Heading(double t) const {
  const UavState s = Sample(t);
  if (s.velocity.head<2>().norm() >= kPlanarSpeedEps) {
    return std::atan2(s.velocity.y(), s.velocity.x());
  }
  return segment_headings_[SegmentAt(t)];
}

double PlannedTrajectory::PathLength() const {
  double total = 0.0;
  for (size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    total += (waypoints_[i + 1] - waypoints_[i]).norm();
  }
  return total;
}

PlannedTrajectory::Projection PlannedTrajectory::Project(
    const Vec3& point) const {
  Projection best{std::numeric_limits<double>::infinity(), 0.0};
  double offset = 0.0;
  for (size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    const Vec3 d = waypoints_[i + 1] - waypoints_[i];
    const double len = d.norm();
    const double s =
        std::clamp((point - waypoints_[i]).dot(d) / (len * len), 0.0, 1.0);
    const double dist = (waypoints_[i] + s * d - point).norm();
    if (dist < best.distance) best = {dist, offset + s * len};
    offset += len;
  }
  return best;
}

}  // namespace apf_nav
