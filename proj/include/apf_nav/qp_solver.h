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

#ifndef APF_NAV_QP_SOLVER_H_
#define APF_NAV_QP_SOLVER_H_

#include <vector>

#include "Eigen/Core"

namespace apf_nav {

enum class QpStatus { kOptimal, kInfeasible, kIterationLimit };

struct QpResult {
  QpStatus status = QpStatus::kOptimal;
  Eigen::VectorXd x;
  // One multiplier per constraint row, zero for inactive rows.
  Eigen::VectorXd multipliers;
  std::vector<int> active_set;
  double objective = 0.0;  // 0.5 x'Hx + g'x
  int iterations = 0;
};

// Strictly convex inequality-constrained QP
//
//   min 0.5 x'Hx + g'x   s.t.   C x <= d
//
// solved with the Goldfarb-Idnani dual active-set method. The Cholesky-based
// factor of H is computed once and reused across Solve calls, so one instance
// serves a stream of problems that share H and differ in g, C or d.
class DualActiveSetQp {
 public:
  // Throws std::invalid_argument unless H is symmetric positive definite.
  explicit DualActiveSetQp(const Eigen::MatrixXd& hessian);

  QpResult Solve(const Eigen::VectorXd& g, const Eigen::MatrixXd& c,
                 const Eigen::VectorXd& d, int max_iterations = 0) const;

  // Same problem with constraints lower <= A x <= upper. Equivalent to Solve
  // with C rows interleaved as (a_i, -a_i) and d as (upper_i, -lower_i), and
  // multipliers are reported in that interleaved order. A x is evaluated once
  // per pass instead of once per side.
  QpResult SolveTwoSided(const Eigen::VectorXd& g, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper,
                         int max_iterations = 0) const;

  int size() const { return static_cast<int>(hessian_.rows()); }
  const Eigen::MatrixXd& hessian() const { return hessian_; }

 private:
  Eigen::MatrixXd hessian_;
  Eigen::MatrixXd inv_chol_t_;  // L^-T with H = L L'
};

// Max of stationarity, primal infeasibility, dual infeasibility and
// complementarity violations for (x, multipliers) on the QP above.
double KktResidual(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                   const Eigen::MatrixXd& c, const Eigen::VectorXd& d,
                   const Eigen::VectorXd& x,
                   const Eigen::VectorXd& multipliers);

}  // namespace apf_nav

#endif  // APF_NAV_QP_SOLVER_H_
