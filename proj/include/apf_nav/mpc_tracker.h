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

#ifndef APF_NAV_MPC_TRACKER_H_
#define APF_NAV_MPC_TRACKER_H_

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "apf_nav/qp_solver.h"
#include "apf_nav/trajectory.h"

namespace apf_nav {

// Per-axis state of the virtual vehicle: position, velocity, acceleration,
// jerk.
using AxisState = Eigen::Vector4d;

struct MpcConfig {
  int horizon = 40;
  double dt = 0.01;
  // Diagonal of Q over (position, velocity, acceleration, jerk).
  Eigen::Vector4d state_weights{100.0, 15.0, 0.1, 0.01};
  double input_weight = 0.001;  // P
  Vec3 v_max = Vec3::Constant(2.0);
  Vec3 a_max = Vec3::Constant(2.0);
  double j_max = 10.0;
  double u_max = 200.0;  // snap
  // Quadratic weight on state-bound slack when a soft start is needed.
  double soft_penalty = 1e6;
};

std::vector<std::string> ValidateMpcConfig(const MpcConfig& cfg,
                                           const std::string& path = "mpc");

struct AxisBounds {
  double v = 0.0;
  double a = 0.0;
  double j = 0.0;
  double u = 0.0;
};

AxisBounds BoundsForAxis(const MpcConfig& cfg, int axis);

// Exact zero-order-hold discretization of the snap-driven integrator chain.
struct ConstantSnapModel {
  Eigen::Matrix4d a;
  Eigen::Vector4d b;
};

ConstantSnapModel BuildModel(double dt);

struct AxisSolution {
  double u0 = 0.0;
  Eigen::VectorXd inputs;            // u_0 .. u_{N-1}
  std::vector<AxisState> predicted;  // x_1 .. x_N
  // sum_i e_i'Q e_i + P u_i^2 over the horizon (slack penalty excluded).
  double cost = 0.0;
  bool soft_constrained = false;
  bool suboptimal = false;
  double kkt_residual = 0.0;
};

// Condensed single-axis problem over the inputs. The prediction matrices and
// the Hessian factorization are built once per (horizon, dt, weights).
class AxisMpc {
 public:
  AxisMpc(int horizon, double dt, const Eigen::Vector4d& state_weights,
          double input_weight, double soft_penalty = 1e6);

  // `refs` holds r_1 .. r_N.
  AxisSolution Solve(const AxisState& x0, std::span<const AxisState> refs,
                     const AxisBounds& bounds) const;

  int horizon() const { return horizon_; }
  const ConstantSnapModel& model() const { return model_; }
  // Stacked predictions X = phi * x0 + gamma * U with X = [x_1; ...; x_N].
  const Eigen::MatrixXd& phi() const { return phi_; }
  const Eigen::MatrixXd& gamma() const { return gamma_; }

 private:
  AxisSolution SolveSoft(const AxisState& x0, const Eigen::VectorXd& err0,
                         const AxisBounds& bounds) const;
  AxisSolution Finish(const AxisState& x0, std::span<const AxisState> refs,
                      const Eigen::VectorXd& inputs) const;

  int horizon_;
  double dt_;
  Eigen::Vector4d state_weights_;
  double input_weight_;
  double soft_penalty_;
  ConstantSnapModel model_;
  Eigen::MatrixXd phi_;
  Eigen::MatrixXd gamma_;
  Eigen::VectorXd q_diag_;     // stacked Q diagonal
  Eigen::MatrixXd hessian_;    // 2 (gamma' Q gamma + P I)
  Eigen::MatrixXd a_;          // input rows then state rows
  Eigen::MatrixXd c_;          // a_ rows interleaved as +/- pairs
  std::unique_ptr<DualActiveSetQp> qp_;
};

struct MpcSolution {
  std::array<AxisSolution, 3> axes;

  Vec3 u_star_0() const {
    return {axes[0].u0, axes[1].u0, axes[2].u0};
  }
  bool soft_constrained() const {
    return axes[0].soft_constrained || axes[1].soft_constrained ||
           axes[2].soft_constrained;
  }
  bool suboptimal() const {
    return axes[0].suboptimal || axes[1].suboptimal || axes[2].suboptimal;
  }
};

// Solves the three decoupled axis problems. refs[axis] holds N states.
MpcSolution Solve(const std::array<AxisState, 3>& x0,
                  const std::array<std::vector<AxisState>, 3>& refs,
                  const MpcConfig& cfg);

struct TrajectoryPoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 jerk = Vec3::Zero();
  Vec3 snap = Vec3::Zero();  // input applied to reach this point
  double yaw = 0.0;
  double stamp = 0.0;
  bool soft_constrained = false;
};

// Virtual vehicle driven by snap commands. Each Step holds the reference
// constant over the horizon, solves, applies u*_0 and returns the new state.
// Yaw is tracked separately by a rate-limited first-order follower.
class MpcTracker {
 public:
  MpcTracker(const MpcConfig& cfg, double yaw_rate_max,
             const UavState& start, double yaw_gain = 2.0);

  TrajectoryPoint Step(const UavState& reference);

  const TrajectoryPoint& current() const { return current_; }
  const std::array<AxisState, 3>& axis_states() const { return axes_; }
  const MpcSolution& last_solution() const { return last_; }

 private:
  MpcConfig cfg_;
  double yaw_rate_max_;
  double yaw_gain_;
  AxisMpc axis_mpc_;
  std::array<AxisState, 3> axes_;
  TrajectoryPoint current_;
  MpcSolution last_;
  long ticks_ = 0;
};

}  // namespace apf_nav

#endif  // APF_NAV_MPC_TRACKER_H_
