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

#include "apf_nav/trace_io.h"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace apf_nav {
namespace {

constexpr int kNumColumns = 35;

void Put(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g,", v);
  line += buf;
}

void Put(std::string& line, const Vec3& v) {
  Put(line, v.x());
  Put(line, v.y());
  Put(line, v.z());
}

std::string HeaderValue(const std::string& header, const std::string& key) {
  const std::string needle = key + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) {
    throw std::runtime_error("ParseTrace: header lacks " + key);
  }
  const auto start = pos + needle.size();
  return header.substr(start, header.find(' ', start) - start);
}

}  // namespace

void WriteTrace(std::ostream& out, const SimTrace& trace) {
  char header[160];
  std::snprintf(header, sizeof(header),
                "# apf_nav-trace v1 config_hash=%016" PRIx64
                " mode=%s dt=%.17g\n",
                trace.config_hash, ModeName(trace.mode).c_str(), trace.dt);
  out << header << kTraceColumns << "\n";
  std::string line;
  for (const TickRecord& r : trace.ticks) {
    line.clear();
    Put(line, r.t);
    line += r.mode == SupervisorMode::kApfActive ? "1," : "0,";
    Put(line, r.state.position);
    Put(line, r.state.velocity);
    Put(line, r.acceleration);
    Put(line, r.jerk);
    Put(line, r.snap);
    Put(line, r.state.yaw);
    Put(line, r.state.yaw_rate);
    Put(line, r.reference.position);
    Put(line, r.reference.velocity);
    Put(line, r.reference.yaw);
    Put(line, r.f_t_magnitude);
    Put(line, r.f_total_modified);
    Put(line, r.f_total_translational);
    line += std::to_string(r.cluster_count);
    line += r.soft_constrained ? ",1\n" : ",0\n";
    out << line;
  }
}

std::string FormatTrace(const SimTrace& trace) {
  std::ostringstream ss;
  WriteTrace(ss, trace);
  return ss.str();
}

SimTrace ParseTrace(std::istream& in) {
  SimTrace trace;
  std::string header;
  if (!std::getline(in, header) || header.rfind("# apf_nav-trace v1", 0) != 0) {
    throw std::runtime_error("ParseTrace: missing trace header");
  }
  trace.config_hash =
      std::strtoull(HeaderValue(header, "config_hash").c_str(), nullptr, 16);
  const auto mode = ParseModeName(HeaderValue(header, "mode"));
  if (!mode) throw std::runtime_error("ParseTrace: unknown mode");
  trace.mode = *mode;
  trace.dt = std::strtod(HeaderValue(header, "dt").c_str(), nullptr);

  std::string columns;
  if (!std::getline(in, columns) || columns != kTraceColumns) {
    throw std::runtime_error("ParseTrace: unexpected column header");
  }
  std::string line;
  std::vector<double> f(kNumColumns);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (int i = 0; i < kNumColumns; ++i) {
      char* end = nullptr;
      f[i] = std::strtod(p, &end);
      if (end == p) {
        throw std::runtime_error("ParseTrace: malformed record: " + line);
      }
      p = end;
      if (i + 1 < kNumColumns) {
        if (*p != ',') {
          throw std::runtime_error("ParseTrace: malformed record: " + line);
        }
        ++p;
      }
    }
    TickRecord r;
    int c = 0;
    const auto vec = [&]() {
      const Vec3 v(f[c], f[c + 1], f[c + 2]);
      c += 3;
      return v;
    };
    r.t = f[c++];
    r.mode = f[c++] != 0.0 ? SupervisorMode::kApfActive
                           : SupervisorMode::kFollowTrajectory;
    r.state.position = vec();
    r.state.velocity = vec();
    r.acceleration = vec();
    r.jerk = vec();
    r.snap = vec();
    r.state.yaw = f[c++];
    r.state.yaw_rate = f[c++];
    r.reference.position = vec();
    r.reference.velocity = vec();
    r.reference.yaw = f[c++];
    r.f_t_magnitude = f[c++];
    r.f_total_modified = vec();
    r.f_total_translational = vec();
    r.cluster_count = static_cast<int>(f[c++]);
    r.soft_constrained = f[c++] != 0.0;
    trace.ticks.push_back(r);
  }
  trace.activations = ExtractActivations(trace.ticks, trace.dt);
  return trace;
}

}  // namespace apf_nav
