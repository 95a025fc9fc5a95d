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

#include "apf_nav/scenario_config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace apf_nav {
namespace {

using nlohmann::json;

constexpr double kTrackerAccelHeadroom = 2.0;

// Walks one JSON object, reporting missing, mistyped and unknown keys with
// their full path.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path,
               std::vector<Diagnostic>* diags)
      : obj_(obj), path_(std::move(path)), diags_(diags) {
    if (!obj_.is_object()) {
      Error(path_, "expected an object");
      valid_ = false;
    }
  }

  ~ObjectReader() {
    if (!valid_) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) Error(Child(key), "unknown key");
    }
  }

  bool valid() const { return valid_; }

  std::string Child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* Find(const std::string& key, bool required) {
    seen_.insert(key);
    if (!valid_) return nullptr;
    const auto it = obj_.find(key);
    if (it == obj_.end()) {
      if (required) Error(Child(key), "missing required key");
      return nullptr;
    }
    return &*it;
  }

  void Number(const std::string& key, double* out, bool required = false) {
    if (const json* v = Find(key, required)) {
      if (!v->is_number()) {
        Error(Child(key), "expected a number");
      } else {
        *out = v->get<double>();
      }
    }
  }

  void Integer(const std::string& key, long* out, bool required = false) {
    if (const json* v = Find(key, required)) {
      if (!v->is_number_integer()) {
        Error(Child(key), "expected an integer");
      } else {
        *out = v->get<long>();
      }
    }
  }

  void String(const std::string& key, std::string* out,
              bool required = false) {
    if (const json* v = Find(key, required)) {
      if (!v->is_string()) {
        Error(Child(key), "expected a string");
      } else {
        *out = v->get<std::string>();
      }
    }
  }

  template <int N>
  bool FixedArray(const json& v, const std::string& path,
                  Eigen::Matrix<double, N, 1>* out) {
    if (!v.is_array() || v.size() != N) {
      Error(path, "expected an array of " + std::to_string(N) + " numbers");
      return false;
    }
    for (int i = 0; i < N; ++i) {
      if (!v[i].is_number()) {
        Error(path, "expected an array of " + std::to_string(N) + " numbers");
        return false;
      }
      (*out)[i] = v[i].get<double>();
    }
    return true;
  }

  template <int N>
  void Vector(const std::string& key, Eigen::Matrix<double, N, 1>* out,
              bool required = false) {
    if (const json* v = Find(key, required)) FixedArray<N>(*v, Child(key), out);
  }

  // Scalar applies to every axis.
  void Vec3OrScalar(const std::string& key, Vec3* out, bool required = false) {
    if (const json* v = Find(key, required)) {
      if (v->is_number()) {
        out->setConstant(v->get<double>());
      } else {
        FixedArray<3>(*v, Child(key), out);
      }
    }
  }

  void Error(const std::string& path, const std::string& message) {
    diags_->push_back({DiagnosticKind::kSchema, path, message});
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<Diagnostic>* diags_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

void AddAll(std::vector<Diagnostic>* diags, DiagnosticKind kind,
            const std::vector<std::string>& messages) {
  for (const std::string& m : messages) {
    const auto colon = m.find(':');
    diags->push_back({kind, m.substr(0, colon),
                      colon == std::string::npos ? m : m.substr(colon + 2)});
  }
}

void ParseScene(const json& doc, Scene* scene,
                std::vector<Diagnostic>* diags) {
  ObjectReader r(doc, "scene", diags);
  if (!r.valid()) return;
  if (const json* wb = r.Find("world_bounds", true)) {
    ObjectReader b(*wb, "scene.world_bounds", diags);
    b.Vector<3>("min", &scene->world_bounds.min, true);
    b.Vector<3>("max", &scene->world_bounds.max, true);
  }
  if (const json* obs = r.Find("obstacles", false)) {
    if (!obs->is_array()) {
      r.Error("scene.obstacles", "expected an array");
      return;
    }
    for (size_t i = 0; i < obs->size(); ++i) {
      const std::string path = "scene.obstacles[" + std::to_string(i) + "]";
      ObjectReader o((*obs)[i], path, diags);
      if (!o.valid()) continue;
      std::string type;
      o.String("type", &type, true);
      if (type == "box") {
        AxisAlignedBox box;
        o.Vector<3>("min", &box.min, true);
        o.Vector<3>("max", &box.max, true);
        scene->obstacles.push_back(box);
      } else if (type == "cylinder") {
        VerticalCylinder cyl;
        o.Vector<2>("center_xy", &cyl.center_xy, true);
        o.Number("radius", &cyl.radius, true);
        o.Number("z_min", &cyl.z_min, true);
        o.Number("z_max", &cyl.z_max, true);
        scene->obstacles.push_back(cyl);
      } else if (!type.empty()) {
        o.Error(path + ".type", "expected \"box\" or \"cylinder\"");
      }
    }
  }
}

void ParseWaypoints(const json* doc, std::vector<Vec3>* out,
                    std::vector<Diagnostic>* diags) {
  if (doc == nullptr) return;
  if (!doc->is_array()) {
    diags->push_back({DiagnosticKind::kSchema, "waypoints",
                      "expected an array of [x, y, z]"});
    return;
  }
  std::vector<Diagnostic> local;
  const json empty = json::object();
  ObjectReader dummy(empty, "", &local);
  for (size_t i = 0; i < doc->size(); ++i) {
    Vec3 p;
    if (dummy.FixedArray<3>((*doc)[i],
                            "waypoints[" + std::to_string(i) + "]", &p)) {
      out->push_back(p);
    }
  }
  diags->insert(diags->end(), local.begin(), local.end());
  if (out->size() < 2 && local.empty()) {
    diags->push_back({DiagnosticKind::kSchema, "waypoints",
                      "at least two waypoints are required"});
  }
}

json ToArray(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::string Diagnostic::ToString() const {
  const char* kind_name = kind == DiagnosticKind::kParse    ? "parse error"
                          : kind == DiagnosticKind::kSchema ? "schema violation"
                                                            : "physical";
  return std::string(kind_name) + ": " + path + ": " + message;
}

std::string ModeName(AvoidanceMode mode) {
  return mode == AvoidanceMode::kConventional ? "conventional" : "modified";
}

std::optional<AvoidanceMode> ParseModeName(const std::string& name) {
  if (name == "conventional") return AvoidanceMode::kConventional;
  if (name == "modified") return AvoidanceMode::kModified;
  return std::nullopt;
}

ApfParams ScenarioConfig::EffectiveApf() const {
  ApfParams p = apf;
  if (mode == AvoidanceMode::kConventional) p.k_rr = 0.0;
  return p;
}

ParseResult ParseScenario(const json& doc) {
  ParseResult result;
  std::vector<Diagnostic>& diags = result.diagnostics;
  ScenarioConfig cfg;
  bool mpc_v_given = false;
  bool mpc_a_given = false;
  {
    ObjectReader root(doc, "", &diags);
    if (!root.valid()) return result;
    root.String("name", &cfg.name);
    std::string mode = "modified";
    root.String("mode", &mode);
    if (auto m = ParseModeName(mode)) {
      cfg.mode = *m;
    } else {
      root.Error("mode", "expected \"conventional\" or \"modified\"");
    }
    if (const json* scene = root.Find("scene", true)) {
      ParseScene(*scene, &cfg.scene, &diags);
    }
    ParseWaypoints(root.Find("waypoints", true), &cfg.waypoints, &diags);

    if (const json* lim = root.Find("limits", true)) {
      ObjectReader r(*lim, "limits", &diags);
      r.Vec3OrScalar("v_max", &cfg.limits.v_max, true);
      cfg.limits.a_max.setConstant(2.0);
      r.Vec3OrScalar("a_max", &cfg.limits.a_max);
      r.Number("yaw_rate_max", &cfg.limits.yaw_rate_max);
      r.Number("yaw_acc_max", &cfg.limits.yaw_acc_max);
    }
    if (const json* apf = root.Find("apf", true)) {
      ObjectReader r(*apf, "apf", &diags);
      r.Number("k_rt", &cfg.apf.k_rt, true);
      r.Number("k_rr", &cfg.apf.k_rr, true);
      r.Number("d_0", &cfg.apf.d_0, true);
      r.Number("F_threshold", &cfg.apf.f_threshold, true);
      r.Number("step_gain", &cfg.apf.step_gain);
      r.Number("d_min", &cfg.apf.d_min);
      std::string ref = "centroid";
      r.String("obstacle_reference", &ref);
      if (ref == "centroid") {
        cfg.apf.obstacle_reference = ObstacleReference::kCentroid;
      } else if (ref == "nearest_point") {
        cfg.apf.obstacle_reference = ObstacleReference::kNearestPoint;
      } else {
        r.Error("apf.obstacle_reference",
                "expected \"centroid\" or \"nearest_point\"");
      }
    }
    if (const json* cl = root.Find("clustering", true)) {
      ObjectReader r(*cl, "clustering", &diags);
      r.Number("c_tolerance", &cfg.clustering.c_tolerance, true);
      long min_size = 1;
      r.Integer("min_cluster_size", &min_size);
      if (min_size < 1) {
        r.Error("clustering.min_cluster_size", "must be >= 1");
      } else {
        cfg.clustering.min_cluster_size = static_cast<std::size_t>(min_size);
      }
    }
    if (const json* li = root.Find("lidar", false)) {
      ObjectReader r(*li, "lidar", &diags);
      LidarModel& l = cfg.sensor.lidar;
      r.Number("range_max", &l.range_max);
      r.Number("fov_h", &l.fov_h);
      r.Number("fov_v", &l.fov_v);
      long rays = l.rays_h, channels = l.channels_v;
      r.Integer("rays_h", &rays);
      r.Integer("channels_v", &channels);
      l.rays_h = static_cast<int>(rays);
      l.channels_v = static_cast<int>(channels);
      r.Vector<3>("mount_offset", &l.mount_offset);
      r.Number("range_noise_stddev", &l.range_noise_stddev);
      r.Number("scan_rate", &cfg.sensor.scan_rate);
    }
    if (const json* mpc = root.Find("mpc", false)) {
      ObjectReader r(*mpc, "mpc", &diags);
      long horizon = cfg.mpc.horizon;
      r.Integer("horizon", &horizon);
      cfg.mpc.horizon = static_cast<int>(horizon);
      r.Number("dt", &cfg.mpc.dt);
      r.Vector<4>("Q", &cfg.mpc.state_weights);
      r.Number("P", &cfg.mpc.input_weight);
      mpc_v_given = r.Find("v_max", false) != nullptr;
      mpc_a_given = r.Find("a_max", false) != nullptr;
      r.Vec3OrScalar("v_max", &cfg.mpc.v_max);
      r.Vec3OrScalar("a_max", &cfg.mpc.a_max);
      r.Number("j_max", &cfg.mpc.j_max);
      r.Number("u_max", &cfg.mpc.u_max);
      r.Number("soft_penalty", &cfg.mpc.soft_penalty);
    }
    if (const json* sim = root.Find("sim", false)) {
      ObjectReader r(*sim, "sim", &diags);
      SimConfig& s = cfg.sim;
      r.Number("dt", &s.dt);
      r.Number("time_budget", &s.time_budget);
      r.Number("goal_tolerance", &s.goal_tolerance);
      long seed = 0;
      r.Integer("seed", &seed);
      s.seed = static_cast<std::uint64_t>(seed);
      std::string plant = "ideal";
      r.String("plant", &plant);
      if (plant == "ideal") {
        s.plant = PlantModel::kIdeal;
      } else if (plant == "first_order_lag") {
        s.plant = PlantModel::kFirstOrderLag;
      } else {
        r.Error("sim.plant", "expected \"ideal\" or \"first_order_lag\"");
      }
      r.Number("lag_time_constant", &s.lag_time_constant);
      r.Number("dt_knot", &s.dt_knot);
      r.Number("stuck_window", &s.stuck_window);
      r.Number("stuck_min_progress", &s.stuck_min_progress);
    }
  }
  if (!mpc_v_given) cfg.mpc.v_max = cfg.limits.v_max;
  // The tracker gets acceleration headroom over the plan so it can close the
  // lag it builds up while the plan itself runs at the limit.
  if (!mpc_a_given) cfg.mpc.a_max = kTrackerAccelHeadroom * cfg.limits.a_max;

  // Per-field ranges.
  AddAll(&diags, DiagnosticKind::kSchema, ValidateScene(cfg.scene));
  AddAll(&diags, DiagnosticKind::kSchema, ValidateLimits(cfg.limits));
  AddAll(&diags, DiagnosticKind::kSchema, ValidateApfParams(cfg.apf));
  AddAll(&diags, DiagnosticKind::kSchema, ValidateLidar(cfg.sensor.lidar));
  AddAll(&diags, DiagnosticKind::kSchema, ValidateMpcConfig(cfg.mpc));
  const auto positive = [&](double v, const char* path) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      diags.push_back({DiagnosticKind::kSchema, path, "must be > 0"});
    }
  };
  positive(cfg.clustering.c_tolerance, "clustering.c_tolerance");
  positive(cfg.sensor.scan_rate, "lidar.scan_rate");
  positive(cfg.sim.dt, "sim.dt");
  positive(cfg.sim.time_budget, "sim.time_budget");
  positive(cfg.sim.goal_tolerance, "sim.goal_tolerance");
  positive(cfg.sim.lag_time_constant, "sim.lag_time_constant");
  positive(cfg.sim.dt_knot, "sim.dt_knot");
  positive(cfg.sim.stuck_window, "sim.stuck_window");
  positive(cfg.sim.stuck_min_progress, "sim.stuck_min_progress");
  for (size_t i = 0; i < cfg.waypoints.size(); ++i) {
    if (!cfg.waypoints[i].allFinite()) {
      diags.push_back({DiagnosticKind::kSchema,
                       "waypoints[" + std::to_string(i) + "]",
                       "must be finite"});
    }
  }
  if (!diags.empty()) return result;

  result.diagnostics = CheckPhysical(cfg);
  if (result.diagnostics.empty()) result.config = std::move(cfg);
  return result;
}

std::vector<Diagnostic> CheckPhysical(const ScenarioConfig& cfg) {
  std::vector<Diagnostic> diags;
  const auto add = [&](std::string path, std::string msg) {
    diags.push_back({DiagnosticKind::kPhysical, std::move(path),
                     std::move(msg)});
  };
  for (size_t i = 0; i < cfg.waypoints.size(); ++i) {
    const std::string path = "waypoints[" + std::to_string(i) + "]";
    if (!Contains(cfg.scene.world_bounds, cfg.waypoints[i])) {
      add(path, "outside scene.world_bounds");
    }
    if (i + 1 < cfg.waypoints.size() &&
        (cfg.waypoints[i + 1] - cfg.waypoints[i]).norm() == 0.0) {
      add(path, "coincides with the next waypoint");
    }
  }
  if (!cfg.waypoints.empty() &&
      Clearance(cfg.scene, cfg.waypoints.front()) <= 0.0) {
    add("waypoints[0]", "start lies inside an obstacle");
  }
  if (cfg.apf.d_min >= cfg.apf.d_0) {
    add("apf.d_min", "must be smaller than apf.d_0");
  }
  if (std::abs(cfg.mpc.dt - cfg.sim.dt) > 1e-12) {
    add("mpc.dt", "must equal sim.dt (the tracker runs once per tick)");
  }
  const double ticks_per_scan = 1.0 / (cfg.sensor.scan_rate * cfg.sim.dt);
  if (ticks_per_scan < 1.0 - 1e-9) {
    add("lidar.scan_rate", "faster than the simulation tick rate");
  }
  if (cfg.sim.time_budget < cfg.sim.dt) {
    add("sim.time_budget", "shorter than one tick");
  }
  return diags;
}

ParseResult ParseScenarioText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    ParseResult r;
    r.diagnostics.push_back({DiagnosticKind::kParse, "<document>", e.what()});
    return r;
  }
  return ParseScenario(doc);
}

ParseResult LoadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back(
        {DiagnosticKind::kParse, path, "cannot open file"});
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseScenarioText(ss.str());
}

json ToJson(const ScenarioConfig& cfg) {
  json obstacles = json::array();
  for (const Primitive& prim : cfg.scene.obstacles) {
    if (const auto* box = std::get_if<AxisAlignedBox>(&prim)) {
      obstacles.push_back(
          {{"type", "box"}, {"min", ToArray(box->min)}, {"max", ToArray(box->max)}});
    } else {
      const auto& cyl = std::get<VerticalCylinder>(prim);
      obstacles.push_back({{"type", "cylinder"},
                           {"center_xy",
                            json::array({cyl.center_xy.x(), cyl.center_xy.y()})},
                           {"radius", cyl.radius},
                           {"z_min", cyl.z_min},
                           {"z_max", cyl.z_max}});
    }
  }
  json waypoints = json::array();
  for (const Vec3& w : cfg.waypoints) waypoints.push_back(ToArray(w));
  const LidarModel& l = cfg.sensor.lidar;
  const MpcConfig& m = cfg.mpc;
  const SimConfig& s = cfg.sim;
  return {
      {"name", cfg.name},
      {"mode", ModeName(cfg.mode)},
      {"scene",
       {{"world_bounds",
         {{"min", ToArray(cfg.scene.world_bounds.min)},
          {"max", ToArray(cfg.scene.world_bounds.max)}}},
        {"obstacles", obstacles}}},
      {"waypoints", waypoints},
      {"limits",
       {{"v_max", ToArray(cfg.limits.v_max)},
        {"a_max", ToArray(cfg.limits.a_max)},
        {"yaw_rate_max", cfg.limits.yaw_rate_max},
        {"yaw_acc_max", cfg.limits.yaw_acc_max}}},
      {"apf",
       {{"k_rt", cfg.apf.k_rt},
        {"k_rr", cfg.apf.k_rr},
        {"d_0", cfg.apf.d_0},
        {"F_threshold", cfg.apf.f_threshold},
        {"step_gain", cfg.apf.step_gain},
        {"d_min", cfg.apf.d_min},
        {"obstacle_reference",
         cfg.apf.obstacle_reference == ObstacleReference::kCentroid
             ? "centroid"
             : "nearest_point"}}},
      {"clustering",
       {{"c_tolerance", cfg.clustering.c_tolerance},
        {"min_cluster_size", cfg.clustering.min_cluster_size}}},
      {"lidar",
       {{"range_max", l.range_max},
        {"fov_h", l.fov_h},
        {"fov_v", l.fov_v},
        {"rays_h", l.rays_h},
        {"channels_v", l.channels_v},
        {"mount_offset", ToArray(l.mount_offset)},
        {"range_noise_stddev", l.range_noise_stddev},
        {"scan_rate", cfg.sensor.scan_rate}}},
      {"mpc",
       {{"horizon", m.horizon},
        {"dt", m.dt},
        {"Q", json::array({m.state_weights[0], m.state_weights[1],
                           m.state_weights[2], m.state_weights[3]})},
        {"P", m.input_weight},
        {"v_max", ToArray(m.v_max)},
        {"a_max", ToArray(m.a_max)},
        {"j_max", m.j_max},
        {"u_max", m.u_max},
        {"soft_penalty", m.soft_penalty}}},
      {"sim",
       {{"dt", s.dt},
        {"time_budget", s.time_budget},
        {"goal_tolerance", s.goal_tolerance},
        {"seed", s.seed},
        {"plant", s.plant == PlantModel::kIdeal ? "ideal" : "first_order_lag"},
        {"lag_time_constant", s.lag_time_constant},
        {"dt_knot", s.dt_knot},
        {"stuck_window", s.stuck_window},
        {"stuck_min_progress", s.stuck_min_progress}}},
  };
}

std::uint64_t ConfigHash(const ScenarioConfig& config) {
  const std::string text = ToJson(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace apf_nav
