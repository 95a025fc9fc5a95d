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

#include "apf_nav/mpc_tracker.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apf_nav {
namespace {

constexpr double kStateBoundSlack = 1e-9;
constexpr double kKktTolerance = 1e-8;

bool WithinBounds(const AxisState& x, const AxisBounds& b) {
  return std::abs(x[1]) <= b.v + kStateBoundSlack &&
         std::abs(x[2]) <= b.a + kStateBoundSlack &&
         std::abs(x[3]) <= b.j + kStateBoundSlack;
}

double StateBound(const AxisBounds& b, int component) {
  switch (component) {
    case 1:
      return b.v;
    case 2:
      return b.a;
    default:
      return b.j;
  }
}

}  // namespace

std::vector<std::string> ValidateMpcConfig(const MpcConfig& cfg,
                                           const std::string& path) {
  std::vector<std::string> errors;
  if (cfg.horizon < 1) errors.push_back(path + ".horizon: must be >= 1");
  if (!(cfg.dt > 0.0)) errors.push_back(path + ".dt: must be > 0");
  if (!(cfg.state_weights.array() >= 0.0).all() ||
      !cfg.state_weights.allFinite()) {
    errors.push_back(path + ".Q: weights must be >= 0");
  }
  if (!(cfg.input_weight > 0.0)) errors.push_back(path + ".P: must be > 0");
  if (!(cfg.v_max.array() > 0.0).all()) {
    errors.push_back(path + ".v_max: must be > 0");
  }
  if (!(cfg.a_max.array() > 0.0).all()) {
    errors.push_back(path + ".a_max: must be > 0");
  }
  if (!(cfg.j_max > 0.0)) errors.push_back(path + ".j_max: must be > 0");
  if (!(cfg.u_max > 0.0)) errors.push_back(path + ".u_max: must be > 0");
  if (!(cfg.soft_penalty > 0.0)) {
    errors.push_back(path + ".soft_penalty: must be > 0");
  }
  return errors;
}

AxisBounds BoundsForAxis(const MpcConfig& cfg, int axis) {
  return {cfg.v_max[axis], cfg.a_max[axis], cfg.j_max, cfg.u_max};
}

ConstantSnapModel BuildModel(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("BuildModel: dt must be > 0");
  ConstantSnapModel m;
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  const double dt4 = dt3 * dt;
  m.a << 1.0, dt, dt2 / 2.0, dt3 / 6.0,  //
      0.0, 1.0, dt, dt2 / 2.0,           //
      0.0, 0.0, 1.0, dt,                 //
      0.0, 0.0, 0.0, 1.0;
  m.b << dt4 / 24.0, dt3 / 6.0, dt2 / 2.0, dt;
  return m;
}

AxisMpc::AxisMpc(int horizon, double dt, const Eigen::Vector4d& state_weights,
                 double input_weight, double soft_penalty)
    : horizon_(horizon),
      dt_(dt),
      state_weights_(state_weights),
      input_weight_(input_weight),
      soft_penalty_(soft_penalty),
      model_(BuildModel(dt)) {
  if (horizon < 1) throw std::invalid_argument("AxisMpc: horizon must be >= 1");
  if (!(input_weight > 0.0)) {
    throw std::invalid_argument("AxisMpc: input weight must be > 0");
  }
  const int n = horizon;
  phi_ = Eigen::MatrixXd::Zero(4 * n, 4);
  gamma_ = Eigen::MatrixXd::Zero(4 * n, n);
  Eigen::Matrix4d a_pow = Eigen::Matrix4d::Identity();
  // a_pow_b[k] = A^k B.
  std::vector<Eigen::Vector4d> a_pow_b(n);
  for (int k = 0; k < n; ++k) {
    a_pow_b[k] = a_pow * model_.b;
    a_pow = model_.a * a_pow;
    phi_.block<4, 4>(4 * k, 0) = a_pow;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      gamma_.block<4, 1>(4 * i, j) = a_pow_b[i - j];
    }
  }
  q_diag_ = state_weights.replicate(n, 1);
  hessian_ = 2.0 * (gamma_.transpose() * q_diag_.asDiagonal() * gamma_);
  hessian_.diagonal().array() += 2.0 * input_weight;
  hessian_ = 0.5 * (hessian_ + hessian_.transpose()).eval();
  qp_ = std::make_unique<DualActiveSetQp>(hessian_);

  a_ = Eigen::MatrixXd::Zero(4 * n, n);
  a_.topRows(n).setIdentity();
  int row = n;
  for (int i = 0; i < n; ++i) {
    for (int comp = 1; comp < 4; ++comp) {
      a_.row(row++) = gamma_.row(4 * i + comp);
    }
  }
  c_ = Eigen::MatrixXd(8 * n, n);
  for (int r = 0; r < 4 * n; ++r) {
    c_.row(2 * r) = a_.row(r);
    c_.row(2 * r + 1) = -a_.row(r);
  }
}

AxisSolution AxisMpc::Finish(const AxisState& x0,
                             std::span<const AxisState> refs,
                             const Eigen::VectorXd& inputs) const {
  AxisSolution sol;
  sol.inputs = inputs;
  sol.u0 = inputs[0];
  const Eigen::VectorXd stacked = phi_ * x0 + gamma_ * inputs;
  sol.predicted.resize(horizon_);
  double cost = input_weight_ * inputs.squaredNorm();
  for (int i = 0; i < horizon_; ++i) {
    sol.predicted[i] = stacked.segment<4>(4 * i);
    const AxisState e = sol.predicted[i] - refs[i];
    cost += e.dot(state_weights_.cwiseProduct(e));
  }
  sol.cost = cost;
  return sol;
}

AxisSolution AxisMpc::Solve(const AxisState& x0,
                            std::span<const AxisState> refs,
                            const AxisBounds& bounds) const {
  if (static_cast<int>(refs.size()) != horizon_) {
    throw std::invalid_argument("AxisMpc::Solve: need one reference per step");
  }
  const int n = horizon_;
  Eigen::VectorXd ref_stack(4 * n);
  for (int i = 0; i < n; ++i) ref_stack.segment<4>(4 * i) = refs[i];
  const Eigen::VectorXd free_response = phi_ * x0;
  const Eigen::VectorXd err0 = free_response - ref_stack;

  if (!WithinBounds(x0, bounds)) {
    AxisSolution sol = SolveSoft(x0, err0, bounds);
    AxisSolution out = Finish(x0, refs, sol.inputs);
    out.soft_constrained = true;
    out.suboptimal = sol.suboptimal;
    out.kkt_residual = sol.kkt_residual;
    return out;
  }

  const Eigen::VectorXd g =
      2.0 * (gamma_.transpose() * q_diag_.cwiseProduct(err0));
  Eigen::VectorXd upper(4 * n);
  Eigen::VectorXd lower(4 * n);
  upper.head(n).setConstant(bounds.u);
  lower.head(n).setConstant(-bounds.u);
  int row = n;
  for (int i = 0; i < n; ++i) {
    for (int comp = 1; comp < 4; ++comp) {
      const double bound = StateBound(bounds, comp);
      const double free = free_response[4 * i + comp];
      upper[row] = bound - free;
      lower[row++] = -bound - free;
    }
  }
  const QpResult qp = qp_->SolveTwoSided(g, a_, lower, upper);
  if (qp.status == QpStatus::kInfeasible) {
    AxisSolution sol = SolveSoft(x0, err0, bounds);
    AxisSolution out = Finish(x0, refs, sol.inputs);
    out.soft_constrained = true;
    out.suboptimal = sol.suboptimal;
    out.kkt_residual = sol.kkt_residual;
    return out;
  }
  AxisSolution out = Finish(x0, refs, qp.x);
  Eigen::VectorXd d(8 * n);
  for (int r = 0; r < 4 * n; ++r) {
    d[2 * r] = upper[r];
    d[2 * r + 1] = -lower[r];
  }
  out.kkt_residual = KktResidual(hessian_, g, c_, d, qp.x, qp.multipliers);
  out.suboptimal = qp.status != QpStatus::kOptimal ||
                   out.kkt_residual > kKktTolerance;
  return out;
}

// Every state bound gets a slack variable shared by its upper and lower rows,
// penalized quadratically. Input bounds stay hard.
AxisSolution AxisMpc::SolveSoft(const AxisState& x0,
                                const Eigen::VectorXd& err0,
                                const AxisBounds& bounds) const {
  const int n = horizon_;
  const int num_slack = 3 * n;
  const int nv = n + num_slack;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nv, nv);
  h.topLeftCorner(n, n) = hessian_;
  h.bottomRightCorner(num_slack, num_slack).diagonal().setConstant(
      2.0 * soft_penalty_);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nv);
  g.head(n) = 2.0 * (gamma_.transpose() * q_diag_.cwiseProduct(err0));

  const Eigen::VectorXd free_response = phi_ * x0;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(8 * n, nv);
  Eigen::VectorXd d(8 * n);
  c.topLeftCorner(2 * n, n) = c_.topRows(2 * n);
  d.head(2 * n).setConstant(bounds.u);
  int row = 2 * n;
  int slack = n;
  for (int i = 0; i < n; ++i) {
    for (int comp = 1; comp < 4; ++comp) {
      const double bound = StateBound(bounds, comp);
      const double free = free_response[4 * i + comp];
      c.block(row, 0, 1, n) = gamma_.row(4 * i + comp);
      c(row, slack) = -1.0;
      d[row++] = bound - free;
      c.block(row, 0, 1, n) = -gamma_.row(4 * i + comp);
      c(row, slack) = -1.0;
      d[row++] = bound + free;
      ++slack;
    }
  }
  const DualActiveSetQp qp(h);
  const QpResult res = qp.Solve(g, c, d);
  AxisSolution sol;
  sol.inputs = res.x.head(n);
  sol.kkt_residual = KktResidual(h, g, c, d, res.x, res.multipliers);
  sol.suboptimal =
      res.status != QpStatus::kOptimal || sol.kkt_residual > kKktTolerance;
  return sol;
}

MpcSolution Solve(const std::array<AxisState, 3>& x0,
                  const std::array<std::vector<AxisState>, 3>& refs,
                  const MpcConfig& cfg) {
  const AxisMpc mpc(cfg.horizon, cfg.dt, cfg.state_weights, cfg.input_weight,
                    cfg.soft_penalty);
  MpcSolution out;
  for (int axis = 0; axis < 3; ++axis) {
    out.axes[axis] = mpc.Solve(x0[axis], refs[axis], BoundsForAxis(cfg, axis));
  }
  return out;
}

MpcTracker::MpcTracker(const MpcConfig& cfg, double yaw_rate_max,
                       const UavState& start, double yaw_gain)
    : cfg_(cfg),
      yaw_rate_max_(yaw_rate_max),
      yaw_gain_(yaw_gain),
      axis_mpc_(cfg.horizon, cfg.dt, cfg.state_weights, cfg.input_weight,
                cfg.soft_penalty) {
  for (int axis = 0; axis < 3; ++axis) {
    axes_[axis] << start.position[axis], start.velocity[axis], 0.0, 0.0;
  }
  current_.position = start.position;
  current_.velocity = start.velocity;
  current_.yaw = start.yaw;
}

TrajectoryPoint MpcTracker::Step(const UavState& reference) {
  const ConstantSnapModel& model = axis_mpc_.model();
  TrajectoryPoint next;
  for (int axis = 0; axis < 3; ++axis) {
    const AxisState r(reference.position[axis], reference.velocity[axis], 0.0,
                      0.0);
    const std::vector<AxisState> refs(cfg_.horizon, r);
    last_.axes[axis] =
        axis_mpc_.Solve(axes_[axis], refs, BoundsForAxis(cfg_, axis));
    const double u = last_.axes[axis].u0;
    axes_[axis] = model.a * axes_[axis] + model.b * u;
    next.position[axis] = axes_[axis][0];
    next.velocity[axis] = axes_[axis][1];
    next.acceleration[axis] = axes_[axis][2];
    next.jerk[axis] = axes_[axis][3];
    next.snap[axis] = u;
  }
  const double yaw_rate =
      std::clamp(yaw_gain_ * WrapAngle(reference.yaw - current_.yaw),
                 -yaw_rate_max_, yaw_rate_max_);
  next.yaw = WrapAngle(current_.yaw + yaw_rate * cfg_.dt);
  ++ticks_;
  next.stamp = static_cast<double>(ticks_) * cfg_.dt;
  next.soft_constrained = last_.soft_constrained();
  current_ = next;
  return next;
}

}  // namespace apf_nav
