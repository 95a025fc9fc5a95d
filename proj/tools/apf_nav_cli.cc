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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli_commands.h"

namespace {

void AddRunOptions(CLI::App* cmd, apf_nav::cli::RunManifest* manifest,
                   std::string* mode, std::string* emit, bool with_mode) {
  cmd->add_option("--config", manifest->config_path, "Scenario file")
      ->required();
  if (with_mode) {
    cmd->add_option("--mode", *mode, "Avoidance mode override")
        ->check(CLI::IsMember({"conventional", "modified"}));
  }
  cmd->add_option("--out", manifest->out_dir,
                  std::string("Output directory (default $") +
                      apf_nav::cli::kOutDirEnv + " or ./apf_nav_out)");
  cmd->add_option("--emit", *emit, "Outputs: trace,metrics,plot")
      ->default_val("trace,metrics");
  cmd->add_option("--seed", manifest->seed, "Noise seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential-field obstacle avoidance simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--config", validate_path, "Scenario file")->required();

  apf_nav::cli::RunManifest run_manifest;
  std::string run_mode, run_emit;
  CLI::App* run = app.add_subcommand("run", "Simulate one scenario");
  AddRunOptions(run, &run_manifest, &run_mode, &run_emit, true);

  apf_nav::cli::RunManifest cmp_manifest;
  std::string cmp_mode, cmp_emit;
  CLI::App* compare = app.add_subcommand(
      "compare", "Run conventional and modified modes side by side");
  AddRunOptions(compare, &cmp_manifest, &cmp_mode, &cmp_emit, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : apf_nav::cli::kUsage;
  }

  const auto finish = [](apf_nav::cli::RunManifest* m, const std::string& mode,
                         const std::string& emit) {
    if (!mode.empty()) m->mode_override = apf_nav::ParseModeName(mode);
    const auto flags = apf_nav::cli::ParseEmitList(emit);
    if (!flags) return false;
    m->emit = *flags;
    return true;
  };

  if (*validate) {
    return apf_nav::cli::CmdValidate(validate_path, std::cout, std::cerr);
  }
  if (*run) {
    if (!finish(&run_manifest, run_mode, run_emit)) {
      std::cerr << "unknown --emit entry\n";
      return apf_nav::cli::kUsage;
    }
    return apf_nav::cli::CmdRun(run_manifest, std::cout, std::cerr);
  }
  if (!finish(&cmp_manifest, cmp_mode, cmp_emit)) {
    std::cerr << "unknown --emit entry\n";
    return apf_nav::cli::kUsage;
  }
  return apf_nav::cli::CmdCompare(cmp_manifest, std::cout, std::cerr);
}
