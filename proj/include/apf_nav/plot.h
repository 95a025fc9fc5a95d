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

#ifndef APF_NAV_PLOT_H_
#define APF_NAV_PLOT_H_

#include <iosfwd>
#include <span>

#include "apf_nav/scenario_config.h"
#include "apf_nav/simulator.h"

namespace apf_nav {

// Top-down SVG: obstacle outlines, the planned path (dashed) and the flown
// path of each trace, colored per trace.
void WritePathSvg(std::ostream& out, const ScenarioConfig& config,
                  std::span<const SimTrace> traces);

}  // namespace apf_nav

#endif  // APF_NAV_PLOT_H_
