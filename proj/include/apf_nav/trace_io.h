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

#ifndef APF_NAV_TRACE_IO_H_
#define APF_NAV_TRACE_IO_H_

#include <iosfwd>
#include <string>

#include "apf_nav/simulator.h"

namespace apf_nav {

// Trace file layout:
//
//   # apf_nav-trace v1 config_hash=<16 hex> mode=<mode> dt=<s>
//   <column header, kTraceColumns>
//   one comma-separated record per tick
//
// Doubles are written with 17 significant digits so a parsed trace is
// bit-identical to the one written.
inline constexpr const char* kTraceColumns =
    "t,mode,px,py,pz,vx,vy,vz,ax,ay,az,jx,jy,jz,sx,sy,sz,yaw,yaw_rate,"
    "ref_px,ref_py,ref_pz,ref_vx,ref_vy,ref_vz,ref_yaw,"
    "f_t,f_x,f_y,f_z,f_rt_x,f_rt_y,f_rt_z,clusters,soft";

void WriteTrace(std::ostream& out, const SimTrace& trace);
std::string FormatTrace(const SimTrace& trace);

// Throws std::runtime_error on malformed input.
SimTrace ParseTrace(std::istream& in);

}  // namespace apf_nav

#endif  // APF_NAV_TRACE_IO_H_
