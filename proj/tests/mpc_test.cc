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

#include <cmath>
#include <random>

#include "Eigen/Dense"
#include "apf_nav/mpc_tracker.h"
#include "apf_nav/qp_solver.h"
#include "apf_nav/scenario_config.h"
#include "apf_nav/simulator.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace apf_nav {
namespace {

const Eigen::Vector4d kQ{100.0, 15.0, 0.1, 0.01};
constexpr double kP = 0.001;

TEST(QpTest, UnconstrainedMinimizer) {
  Eigen::MatrixXd h(2, 2);
  h << 4, 1, 1, 3;
  const Eigen::VectorXd g = Eigen::Vector2d(1, 2);
  const DualActiveSetQp qp(h);
  const QpResult r = qp.Solve(g, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0));
  ASSERT_EQ(r.status, QpStatus::kOptimal);
  EXPECT_LT((r.x - h.ldlt().solve(-g)).norm(), 1e-12);
}

TEST(QpTest, DetectsInfeasibility) {
  const DualActiveSetQp qp(Eigen::MatrixXd::Identity(1, 1));
  Eigen::MatrixXd c(2, 1);
  c << 1, -1;
  const Eigen::VectorXd d = Eigen::Vector2d(-1, -1);  // x <= -1 and x >= 1
  EXPECT_EQ(qp.Solve(Eigen::VectorXd::Zero(1), c, d).status,
            QpStatus::kInfeasible);
}

TEST(QpTest, RejectsIndefiniteHessian) {
  Eigen::MatrixXd h(2, 2);
  h << 1, 0, 0, -1;
  EXPECT_THROW(DualActiveSetQp{h}, std::invalid_argument);
}

TEST(QpTest, RandomProblemsMatchEnumeration) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    AxisState x0(u(rng), u(rng), 0.5 * u(rng), u(rng));
    std::vector<AxisState> refs(3);
    for (auto& r : refs) r = AxisState(2 * u(rng), 0, 0, 0);
    const AxisBounds b{1.0 + 0.5 * u(rng), 1.5, 2.0, 40.0 + 20 * u(rng)};
    const auto dense =
        oracle::BuildDenseAxisProblem(x0, refs, 0.1, kQ, kP, b);
    const auto want = oracle::EnumerateActiveSets(dense);
    if (!want) continue;
    const DualActiveSetQp qp(dense.h);
    const QpResult r = qp.Solve(dense.g, dense.c, dense.d);
    ASSERT_EQ(r.status, QpStatus::kOptimal);
    EXPECT_NEAR(dense.Cost(r.x), dense.Cost(*want),
                1e-9 * (1 + std::abs(dense.Cost(*want))));
    EXPECT_LT(KktResidual(dense.h, dense.g, dense.c, dense.d, r.x,
                          r.multipliers),
              1e-8);
  }
}

TEST(ModelTest, UnitStepRows) {
  const ConstantSnapModel m = BuildModel(1.0);
  EXPECT_TRUE(m.a.row(0).isApprox(Eigen::RowVector4d(1, 1, 0.5, 1.0 / 6)));
  EXPECT_TRUE(m.b.isApprox(Eigen::Vector4d(1.0 / 24, 1.0 / 6, 0.5, 1.0)));
}

TEST(ModelTest, ConstantVelocityAdvancesExactly) {
  const ConstantSnapModel m = BuildModel(0.01);
  const AxisState x(2.0, 1.5, 0, 0);
  const AxisState y = m.a * x;
  EXPECT_EQ(y[0], 2.0 + 1.5 * 0.01);
  EXPECT_EQ(y[1], 1.5);
}

TEST(ModelTest, TwoStepsEqualOneDoubleStep) {
  const double dt = 0.037;
  const ConstantSnapModel one = BuildModel(dt);
  const ConstantSnapModel two = BuildModel(2 * dt);
  const AxisState x(0.3, -1.2, 0.7, 2.0);
  const double u = -3.1;
  const AxisState stepped = one.a * (one.a * x + one.b * u) + one.b * u;
  EXPECT_LT((stepped - (two.a * x + two.b * u)).norm(), 1e-13);
}

TEST(AxisMpcTest, EquilibriumNeedsNoInput) {
  const AxisMpc mpc(10, 0.01, kQ, kP);
  const AxisState x0(3, 0, 0, 0);
  const std::vector<AxisState> refs(10, x0);
  const AxisSolution s = mpc.Solve(x0, refs, {2, 2, 10, 200});
  EXPECT_EQ(s.u0, 0.0);
}

TEST(AxisMpcTest, SingleStepClosedForm) {
  const double dt = 0.05;
  const AxisMpc mpc(1, dt, kQ, kP);
  const AxisState x0(0.2, 0.1, 0, 0);
  const AxisState r(0.25, 0.1, 0, 0);
  const ConstantSnapModel m = BuildModel(dt);
  const Eigen::Vector4d e0 = m.a * x0 - r;
  // d/du of (e0 + B u)'Q(e0 + B u) + P u^2 set to zero.
  const Eigen::Vector4d qb = m.b.cwiseProduct(kQ);
  const double exact = -qb.dot(e0) / (qb.dot(m.b) + kP);
  const std::vector<AxisState> refs = {r};
  const AxisSolution s = mpc.Solve(x0, refs, {2, 2, 10, 1e6});
  EXPECT_NEAR(s.u0, exact, 1e-9 * std::abs(exact));
}

TEST(AxisMpcTest, ActiveInputBoundMatchesEnumeration) {
  const double dt = 0.1;
  const AxisMpc mpc(3, dt, kQ, kP);
  const AxisState x0 = AxisState::Zero();
  const std::vector<AxisState> refs(3, AxisState(1, 0, 0, 0));
  const AxisBounds b{5, 5, 50, 10};
  const auto dense = oracle::BuildDenseAxisProblem(x0, refs, dt, kQ, kP, b);
  const auto want = oracle::EnumerateActiveSets(dense);
  ASSERT_TRUE(want.has_value());
  // The enumerated optimum sits on the snap bound.
  EXPECT_NEAR(want->cwiseAbs().maxCoeff(), b.u, 1e-9);
  const AxisSolution s = mpc.Solve(x0, refs, b);
  EXPECT_LT((s.inputs - *want).norm(), 1e-8);
  EXPECT_NEAR(s.cost, dense.Cost(*want), 1e-7);
}

TEST(AxisMpcTest, RelaxedBoundsGiveLeastSquares) {
  const double dt = 0.02;
  const AxisMpc mpc(5, dt, kQ, kP);
  const AxisState x0(0.1, -0.3, 0.2, 0.0);
  std::vector<AxisState> refs;
  for (int k = 0; k < 5; ++k) refs.emplace_back(0.5 + 0.1 * k, 0.2, 0, 0);
  const AxisSolution s = mpc.Solve(x0, refs, {1e9, 1e9, 1e9, 1e9});
  const Eigen::VectorXd want = oracle::BatchLeastSquares(x0, refs, dt, kQ, kP);
  EXPECT_LE((s.inputs - want).norm(), 1e-6 * want.norm());
}

TEST(AxisMpcTest, BoundViolatingStartIsSoftened) {
  const AxisMpc mpc(10, 0.01, kQ, kP);
  const AxisState x0(0, 3.0, 0, 0);  // faster than v = 2
  const std::vector<AxisState> refs(10, AxisState(1, 0, 0, 0));
  const AxisSolution s = mpc.Solve(x0, refs, {2, 2, 10, 200});
  EXPECT_TRUE(s.soft_constrained);
  EXPECT_TRUE(std::isfinite(s.u0));
}

MpcConfig DefaultMpc() {
  MpcConfig cfg;
  cfg.v_max = Vec3::Constant(2.0);
  cfg.a_max = Vec3::Constant(2.0);
  return cfg;
}

TEST(TrackerTest, HoverStaysPut) {
  UavState start;
  start.position = {1, 2, 3};
  MpcTracker tracker(DefaultMpc(), 1.0, start);
  for (int i = 0; i < 200; ++i) {
    const TrajectoryPoint p = tracker.Step(start);
    ASSERT_LT((p.position - start.position).norm(), 1e-9);
  }
}

TEST(TrackerTest, StepResponseSettlesWithoutOvershoot) {
  const MpcConfig cfg = DefaultMpc();
  UavState start;
  MpcTracker tracker(cfg, 1.0, start);
  UavState ref;
  ref.position = {1, 0, 0};
  double prev = 0.0;
  double peak = 0.0;
  for (int i = 0; i < 1500; ++i) {
    const TrajectoryPoint p = tracker.Step(ref);
    EXPECT_GE(p.position.x(), prev - 1e-9);
    EXPECT_LE(p.velocity.cwiseAbs().maxCoeff(), cfg.v_max.x() + 1e-6);
    prev = p.position.x();
    peak = std::max(peak, prev);
  }
  EXPECT_LE(peak, 1.05);
  EXPECT_NEAR(prev, 1.0, 1e-3);
}

TEST(TrackerTest, ScenarioOneReferenceKeepsSpeedLimit) {
  const ParseResult parsed =
      LoadScenarioFile(APF_NAV_SCENARIO_DIR "/scenario1_wall.json");
  ASSERT_TRUE(parsed.ok());
  const ScenarioConfig& cfg = *parsed.config;
  const PlannedTrajectory traj = PlanFor(cfg);
  MpcTracker tracker(cfg.mpc, cfg.limits.yaw_rate_max, InitialState(traj));
  for (double t = 0.0; t < traj.duration() + 2.0; t += cfg.sim.dt) {
    const TrajectoryPoint p = tracker.Step(traj.Sample(t));
    // The plan runs along x, so the speed is the x velocity.
    ASSERT_LE(p.velocity.norm(), 2.0 + 1e-6) << "t=" << t;
  }
}

}  // namespace
}  // namespace apf_nav
