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

#include "cli_commands.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "apf_nav/metrics.h"
#include "apf_nav/plot.h"
#include "apf_nav/simulator.h"
#include "apf_nav/trace_io.h"

namespace apf_nav::cli {
namespace {

int ExitCodeFor(const std::vector<Diagnostic>& diags) {
  int code = kOk;
  for (const Diagnostic& d : diags) {
    const int c = d.kind == DiagnosticKind::kParse    ? kParseError
                  : d.kind == DiagnosticKind::kSchema ? kSchemaViolation
                                                      : kPhysicalInconsistency;
    // Report the earliest failing stage.
    if (code == kOk || c < code) code = c;
  }
  return code;
}

std::optional<ScenarioConfig> LoadOrReport(const RunManifest& manifest,
                                           std::ostream& err, int* code) {
  ParseResult parsed = LoadScenarioFile(manifest.config_path);
  if (!parsed.ok()) {
    for (const Diagnostic& d : parsed.diagnostics) {
      err << d.ToString() << "\n";
    }
    *code = ExitCodeFor(parsed.diagnostics);
    return std::nullopt;
  }
  ScenarioConfig cfg = *parsed.config;
  if (manifest.mode_override) cfg.mode = *manifest.mode_override;
  if (manifest.seed) cfg.sim.seed = *manifest.seed;
  *code = kOk;
  return cfg;
}

std::filesystem::path OutDir(const RunManifest& manifest) {
  if (!manifest.out_dir.empty()) return manifest.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "apf_nav_out";
}

bool WriteFile(const std::filesystem::path& path, const std::string& text,
               std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) {
    err << "io error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

bool PrepareOutDir(const std::filesystem::path& dir, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "io error: cannot create " << dir.string() << ": " << ec.message()
        << "\n";
    return false;
  }
  return true;
}

bool EmitRun(const std::filesystem::path& dir, const ScenarioConfig& cfg,
             const SimTrace& trace, const Metrics& metrics,
             const EmitFlags& emit, std::ostream& err) {
  const std::string suffix = ModeName(cfg.mode);
  if (emit.trace &&
      !WriteFile(dir / ("trace_" + suffix + ".csv"), FormatTrace(trace), err)) {
    return false;
  }
  if (emit.metrics && !WriteFile(dir / ("metrics_" + suffix + ".txt"),
                                 FormatMetrics(metrics), err)) {
    return false;
  }
  return true;
}

std::string PlotText(const ScenarioConfig& cfg,
                     std::span<const SimTrace> traces) {
  std::ostringstream ss;
  WritePathSvg(ss, cfg, traces);
  return ss.str();
}

}  // namespace

std::optional<EmitFlags> ParseEmitList(const std::string& list) {
  EmitFlags flags{false, false, false};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "trace") {
      flags.trace = true;
    } else if (item == "metrics") {
      flags.metrics = true;
    } else if (item == "plot") {
      flags.plot = true;
    } else if (!item.empty()) {
      return std::nullopt;
    }
  }
  return flags;
}

int CmdValidate(const std::string& config_path, std::ostream& out,
                std::ostream& err) {
  const ParseResult parsed = LoadScenarioFile(config_path);
  if (parsed.ok()) {
    out << config_path << ": valid (config_hash=" << std::hex
        << ConfigHash(*parsed.config) << std::dec << ")\n";
    return kOk;
  }
  for (const Diagnostic& d : parsed.diagnostics) err << d.ToString() << "\n";
  return ExitCodeFor(parsed.diagnostics);
}

int CmdRun(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  int code = kOk;
  const std::optional<ScenarioConfig> cfg = LoadOrReport(manifest, err, &code);
  if (!cfg) return code;
  const std::filesystem::path dir = OutDir(manifest);
  if (!PrepareOutDir(dir, err)) return kIoError;

  const SimTrace trace = Run(*cfg);
  const Metrics metrics = ComputeMetrics(trace, *cfg);
  if (!EmitRun(dir, *cfg, trace, metrics, manifest.emit, err)) {
    return kIoError;
  }
  if (manifest.emit.plot &&
      !WriteFile(dir / ("path_" + ModeName(cfg->mode) + ".svg"),
                 PlotText(*cfg, std::span<const SimTrace>(&trace, 1)), err)) {
    return kIoError;
  }
  out << ModeName(cfg->mode) << ": " << SummaryLine(metrics) << "\n";
  return metrics.goal_reached ? kOk : kGoalNotReached;
}

int CmdCompare(const RunManifest& manifest, std::ostream& out,
               std::ostream& err) {
  int code = kOk;
  const std::optional<ScenarioConfig> base =
      LoadOrReport(manifest, err, &code);
  if (!base) return code;
  const std::filesystem::path dir = OutDir(manifest);
  if (!PrepareOutDir(dir, err)) return kIoError;

  ScenarioConfig configs[2] = {*base, *base};
  configs[0].mode = AvoidanceMode::kConventional;
  configs[1].mode = AvoidanceMode::kModified;
  SimTrace traces[2];
  Metrics metrics[2];
  {
    std::vector<std::jthread> workers;
    for (int i = 0; i < 2; ++i) {
      workers.emplace_back([&, i] {
        traces[i] = Run(configs[i]);
        metrics[i] = ComputeMetrics(traces[i], configs[i]);
      });
    }
  }
  for (int i = 0; i < 2; ++i) {
    if (!EmitRun(dir, configs[i], traces[i], metrics[i], manifest.emit, err)) {
      return kIoError;
    }
  }
  if (manifest.emit.plot &&
      !WriteFile(dir / "path_compare.svg", PlotText(*base, traces), err)) {
    return kIoError;
  }

  char line[256];
  std::snprintf(line, sizeof(line), "%-13s %-12s %-12s %-12s %-14s %-17s %s\n",
                "mode", "goal_reached", "time_to_goal", "path_length",
                "min_clearance", "oscillation_count", "returned_to_plan");
  out << line;
  for (int i = 0; i < 2; ++i) {
    const Metrics& m = metrics[i];
    std::snprintf(line, sizeof(line),
                  "%-13s %-12d %-12.2f %-12.2f %-14.2f %-17d %d\n",
                  ModeName(configs[i].mode).c_str(), m.goal_reached ? 1 : 0,
                  m.time_to_goal, m.path_length, m.min_clearance,
                  m.oscillation_count, m.returned_to_plan ? 1 : 0);
    out << line;
  }
  return kOk;
}

}  // namespace apf_nav::cli
