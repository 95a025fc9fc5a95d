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

#ifndef APF_NAV_TOOLS_CLI_COMMANDS_H_
#define APF_NAV_TOOLS_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "apf_nav/scenario_config.h"

namespace apf_nav::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kGoalNotReached = 1,
  kUsage = 2,
  kParseError = 3,
  kSchemaViolation = 4,
  kPhysicalInconsistency = 5,
  kIoError = 6,
};

inline constexpr const char* kOutDirEnv = "APF_NAV_OUT_DIR";

struct EmitFlags {
  bool trace = true;
  bool metrics = true;
  bool plot = false;
};

struct RunManifest {
  std::string config_path;
  std::optional<AvoidanceMode> mode_override;
  std::string out_dir;  // empty: $APF_NAV_OUT_DIR, else ./apf_nav_out
  EmitFlags emit;
  std::optional<std::uint64_t> seed;
};

// Parses "trace,metrics,plot" style lists. Returns nullopt on unknown names.
std::optional<EmitFlags> ParseEmitList(const std::string& list);

int CmdValidate(const std::string& config_path, std::ostream& out,
                std::ostream& err);
int CmdRun(const RunManifest& manifest, std::ostream& out, std::ostream& err);
int CmdCompare(const RunManifest& manifest, std::ostream& out,
               std::ostream& err);

}  // namespace apf_nav::cli

#endif  // APF_NAV_TOOLS_CLI_COMMANDS_H_
