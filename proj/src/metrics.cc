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

#include "apf_nav/metrics.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace apf_nav {
namespace {

// Running maximum of the arc length reached along the plan, per tick.
std::vector<double> FurthestProgress(std::span<const TickRecord> ticks,
                                     const PlannedTrajectory& traj) {
  std::vector<double> out(ticks.size());
  double furthest = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ticks.size(); ++i) {
    furthest =
        std::max(furthest, traj.Project(ticks[i].state.position).arc_length);
    out[i] = furthest;
  }
  return out;
}

// Detector over ticks[0, end] given precomputed progress and APF prefix
// counts (apf_prefix[i] = ApfActive ticks in [0, i)).
bool StuckAt(std::span<const TickRecord> ticks,
             const std::vector<double>& progress,
             const std::vector<long>& apf_prefix, size_t end,
             const StuckCriteria& c) {
  const double t_end = ticks[end].t;
  if (t_end - ticks.front().t < c.window - 1e-9) return false;
  // First tick inside the trailing window.
  size_t lo = 0, hi = end;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (ticks[mid].t < t_end - c.window - 1e-9) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  const size_t start = lo;
  const double advanced = progress[end] - progress[start];
  const long in_window = static_cast<long>(end - start + 1);
  const long apf = apf_prefix[end + 1] - apf_prefix[start];
  return advanced < c.min_progress &&
         static_cast<double>(apf) > c.min_apf_fraction * in_window;
}

std::vector<long> ApfPrefix(std::span<const TickRecord> ticks) {
  std::vector<long> prefix(ticks.size() + 1, 0);
  for (size_t i = 0; i < ticks.size(); ++i) {
    prefix[i + 1] =
        prefix[i] + (ticks[i].mode == SupervisorMode::kApfActive ? 1 : 0);
  }
  return prefix;
}

int SignChanges(const std::vector<double>& values) {
  int changes = 0;
  int last = 0;
  for (double v : values) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

bool DetectLocalMinimum(std::span<const TickRecord> ticks,
                        const PlannedTrajectory& traj,
                        const StuckCriteria& criteria) {
  if (ticks.empty()) return false;
  const std::vector<double> progress = FurthestProgress(ticks, traj);
  return StuckAt(ticks, progress, ApfPrefix(ticks), ticks.size() - 1,
                 criteria);
}

Metrics ComputeMetrics(const SimTrace& trace, const ScenarioConfig& config) {
  if (trace.ticks.empty()) {
    throw std::invalid_argument("ComputeMetrics: empty trace");
  }
  const PlannedTrajectory traj = PlanFor(config);
  const std::span<const TickRecord> ticks(trace.ticks);
  const Vec3 goal = config.waypoints.back();
  const double tol = config.sim.goal_tolerance;
  Metrics m;

  m.time_to_goal = std::numeric_limits<double>::quiet_NaN();
  for (const TickRecord& tick : ticks) {
    if ((tick.state.position - goal).norm() <= tol) {
      m.goal_reached = true;
      m.time_to_goal = tick.t;
      break;
    }
  }

  m.min_clearance = std::numeric_limits<double>::infinity();
  std::vector<double> deviation(ticks.size());
  for (size_t i = 0; i < ticks.size(); ++i) {
    const Vec3& p = ticks[i].state.position;
    if (i > 0) m.path_length += (p - ticks[i - 1].state.position).norm();
    m.min_clearance = std::min(m.min_clearance, Clearance(config.scene, p));
    deviation[i] = traj.Project(p).distance;
    m.max_deviation_from_plan = std::max(m.max_deviation_from_plan,
                                         deviation[i]);
  }

  // Back on the plan after the last avoidance phase, before the goal.
  long last_apf = -1;
  for (size_t i = 0; i < ticks.size(); ++i) {
    if (ticks[i].mode == SupervisorMode::kApfActive) last_apf = i;
  }
  if (last_apf < 0) {
    m.returned_to_plan = true;
  } else {
    for (size_t i = last_apf + 1; i < ticks.size(); ++i) {
      if ((ticks[i].state.position - goal).norm() <= tol) break;
      if (deviation[i] < tol) {
        m.returned_to_plan = true;
        break;
      }
    }
  }

  std::vector<double> force_x;
  std::vector<double> velocity_x;
  for (const TickRecord& tick : ticks) {
    if (tick.mode != SupervisorMode::kApfActive) continue;
    force_x.push_back(tick.f_total_modified.x());
    velocity_x.push_back(tick.state.velocity.x());
  }
  m.oscillation_count = SignChanges(force_x);
  m.x_velocity_reversals = SignChanges(velocity_x);

  const StuckCriteria criteria{config.sim.stuck_window,
                               config.sim.stuck_min_progress, 0.5};
  const std::vector<double> progress = FurthestProgress(ticks, traj);
  const std::vector<long> apf_prefix = ApfPrefix(ticks);
  const long stride =
      std::max(1L, std::lround(1.0 / trace.dt));  // evaluate once per second
  for (size_t end = 0; end < ticks.size() && !m.stuck; ++end) {
    if (end % stride != 0 && end + 1 != ticks.size()) continue;
    m.stuck = StuckAt(ticks, progress, apf_prefix, end, criteria);
  }

  const std::vector<ApfActivation> acts =
      ExtractActivations(ticks, trace.dt);
  m.apf_activations = static_cast<int>(acts.size());
  for (const ApfActivation& a : acts) m.apf_time += a.t_o;
  return m;
}

void WriteMetrics(std::ostream& out, const Metrics& m) {
  out << "goal_reached=" << (m.goal_reached ? 1 : 0) << "\n"
      << "time_to_goal=" << FormatDouble(m.time_to_goal) << "\n"
      << "path_length=" << FormatDouble(m.path_length) << "\n"
      << "min_clearance=" << FormatDouble(m.min_clearance) << "\n"
      << "max_deviation_from_plan="
      << FormatDouble(m.max_deviation_from_plan) << "\n"
      << "returned_to_plan=" << (m.returned_to_plan ? 1 : 0) << "\n"
      << "oscillation_count=" << m.oscillation_count << "\n"
      << "stuck=" << (m.stuck ? 1 : 0) << "\n"
      << "apf_activations=" << m.apf_activations << "\n"
      << "apf_time=" << FormatDouble(m.apf_time) << "\n"
      << "x_velocity_reversals=" << m.x_velocity_reversals << "\n";
}

std::string FormatMetrics(const Metrics& metrics) {
  std::ostringstream ss;
  WriteMetrics(ss, metrics);
  return ss.str();
}

Metrics ParseMetrics(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("ParseMetrics: malformed line: " + line);
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::runtime_error(std::string("ParseMetrics: missing ") + key);
    }
    return it->second;
  };
  const auto num = [&](const char* key) {
    return std::strtod(get(key).c_str(), nullptr);
  };
  Metrics m;
  m.goal_reached = get("goal_reached") == "1";
  m.time_to_goal = num("time_to_goal");
  m.path_length = num("path_length");
  m.min_clearance = num("min_clearance");
  m.max_deviation_from_plan = num("max_deviation_from_plan");
  m.returned_to_plan = get("returned_to_plan") == "1";
  m.oscillation_count = std::stoi(get("oscillation_count"));
  m.stuck = get("stuck") == "1";
  m.apf_activations = std::stoi(get("apf_activations"));
  m.apf_time = num("apf_time");
  m.x_velocity_reversals = std::stoi(get("x_velocity_reversals"));
  return m;
}

std::string SummaryLine(const Metrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "goal_reached=%d time_to_goal=%.2f path_length=%.2f "
                "min_clearance=%.2f max_deviation=%.2f returned_to_plan=%d "
                "oscillation_count=%d stuck=%d",
                m.goal_reached ? 1 : 0, m.time_to_goal, m.path_length,
                m.min_clearance, m.max_deviation_from_plan,
                m.returned_to_plan ? 1 : 0, m.oscillation_count,
                m.stuck ? 1 : 0);
  return buf;
}

}  // namespace apf_nav
