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

#include "apf_nav/qp_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "Eigen/Cholesky"

namespace apf_nav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Working set of the dual method. Internally constraints are written as
// n'x >= b with n = -C_row and b = -d, so the slack n'x - b = d - C x.
struct Working {
  Eigen::MatrixXd j;  // orthogonal-ish basis, J J' = H^-1 restricted
  Eigen::MatrixXd r;  // upper triangular, leading iq x iq block used
  std::vector<int> active;
  Eigen::VectorXd u;  // multipliers; slot iq holds the candidate's
  int iq = 0;
  double r_norm = 1.0;
};

// Appends the constraint whose J'n is `dvec` (modified in place).
bool AddConstraint(Working& w, Eigen::VectorXd& dvec) {
  const int n = static_cast<int>(w.j.rows());
  for (int jj = n - 1; jj >= w.iq + 1; --jj) {
    double cc = dvec[jj - 1];
    double ss = dvec[jj];
    const double h = std::hypot(cc, ss);
    if (h == 0.0) continue;
    dvec[jj] = 0.0;
    ss /= h;
    cc /= h;
    if (cc < 0.0) {
      cc = -cc;
      ss = -ss;
      dvec[jj - 1] = -h;
    } else {
      dvec[jj - 1] = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = 0; k < n; ++k) {
      const double t1 = w.j(k, jj - 1);
      const double t2 = w.j(k, jj);
      w.j(k, jj - 1) = t1 * cc + t2 * ss;
      w.j(k, jj) = xny * (t1 + w.j(k, jj - 1)) - t2;
    }
  }
  w.iq += 1;
  for (int i = 0; i < w.iq; ++i) w.r(i, w.iq - 1) = dvec[i];
  if (std::abs(dvec[w.iq - 1]) <= kEps * w.r_norm) return false;
  w.r_norm = std::max(w.r_norm, std::abs(dvec[w.iq - 1]));
  return true;
}

// Removes active position `pos` and retriangularizes R with Givens rotations.
void DeleteConstraint(Working& w, int pos) {
  const int n = static_cast<int>(w.j.rows());
  for (int i = pos; i < w.iq - 1; ++i) {
    w.active[i] = w.active[i + 1];
    w.u[i] = w.u[i + 1];
    w.r.col(i) = w.r.col(i + 1);
  }
  w.active[w.iq - 1] = w.active[w.iq];
  w.u[w.iq - 1] = w.u[w.iq];
  w.active[w.iq] = -1;
  w.u[w.iq] = 0.0;
  w.r.col(w.iq - 1).setZero();
  w.iq -= 1;
  if (w.iq == 0) return;

  for (int jj = pos; jj < w.iq; ++jj) {
    double cc = w.r(jj, jj);
    double ss = w.r(jj + 1, jj);
    const double h = std::hypot(cc, ss);
    if (h == 0.0) continue;
    cc /= h;
    ss /= h;
    w.r(jj + 1, jj) = 0.0;
    if (cc < 0.0) {
      w.r(jj, jj) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      w.r(jj, jj) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = jj + 1; k < w.iq; ++k) {
      const double t1 = w.r(jj, k);
      const double t2 = w.r(jj + 1, k);
      w.r(jj, k) = t1 * cc + t2 * ss;
      w.r(jj + 1, k) = xny * (t1 + w.r(jj, k)) - t2;
    }
    for (int k = 0; k < n; ++k) {
      const double t1 = w.j(k, jj);
      const double t2 = w.j(k, jj + 1);
      w.j(k, jj) = t1 * cc + t2 * ss;
      w.j(k, jj + 1) = xny * (w.j(k, jj) + t1) - t2;
    }
  }
}

// Row access for `C x <= d` given explicitly.
struct DenseRows {
  const Eigen::MatrixXd& c;
  const Eigen::VectorXd& d;

  int count() const { return static_cast<int>(c.rows()); }
  double bound(int row) const { return d[row]; }
  void Slacks(const Eigen::VectorXd& x, Eigen::VectorXd* out) const {
    out->noalias() = d - c * x;
  }
  double Slack(const Eigen::VectorXd& x, int row) const {
    return d[row] - c.row(row).dot(x);
  }
  void Normal(int row, Eigen::VectorXd* np) const {
    *np = -c.row(row).transpose();
  }
};

// Row access for `lower <= A x <= upper`, laid out as row 2i = (a_i, upper_i)
// and row 2i + 1 = (-a_i, -lower_i). A x is formed once per scan.
struct PairedRows {
  const Eigen::MatrixXd& a;
  const Eigen::VectorXd& upper;
  const Eigen::VectorXd& lower;
  mutable Eigen::VectorXd ax;

  int count() const { return 2 * static_cast<int>(a.rows()); }
  double bound(int row) const {
    return row % 2 ? -lower[row / 2] : upper[row / 2];
  }
  void Slacks(const Eigen::VectorXd& x, Eigen::VectorXd* out) const {
    ax.noalias() = a * x;
    for (int i = 0; i < a.rows(); ++i) {
      (*out)[2 * i] = upper[i] - ax[i];
      (*out)[2 * i + 1] = ax[i] - lower[i];
    }
  }
  double Slack(const Eigen::VectorXd& x, int row) const {
    const double v = a.row(row / 2).dot(x);
    return row % 2 ? v - lower[row / 2] : upper[row / 2] - v;
  }
  void Normal(int row, Eigen::VectorXd* np) const {
    if (row % 2) {
      *np = a.row(row / 2).transpose();
    } else {
      *np = -a.row(row / 2).transpose();
    }
  }
};

template <typename Rows>
QpResult SolveCore(const Eigen::MatrixXd& hessian,
                   const Eigen::MatrixXd& inv_chol_t, const Eigen::VectorXd& g,
                   const Rows& rows, int max_iterations) {
  const int n = static_cast<int>(hessian.rows());
  const int m = rows.count();
  if (max_iterations <= 0) max_iterations = 10 * (n + m) + 100;

  Working w;
  w.j = inv_chol_t;
  w.r = Eigen::MatrixXd::Zero(n, n);
  w.active.assign(n + 1, -1);
  w.u = Eigen::VectorXd::Zero(n + 1);

  QpResult out;
  Eigen::VectorXd x = -(w.j * (w.j.transpose() * g));
  std::vector<char> in_active(m, 0);
  std::vector<char> excluded(m, 0);
  Eigen::VectorXd dvec(n), z(n), r(n + 1), np(n), slacks(m), tol(m);
  for (int row = 0; row < m; ++row) {
    tol[row] = 1e-11 * (1.0 + std::abs(rows.bound(row)));
  }

  int iter = 0;
  while (true) {
    // Step 1: pick the most violated constraint outside the active set.
    int p = -1;
    double worst = 0.0;
    rows.Slacks(x, &slacks);
    for (int row = 0; row < m; ++row) {
      const double s = slacks[row];
      if (s < worst && s < -tol[row] && !in_active[row] && !excluded[row]) {
        worst = s;
        p = row;
      }
    }
    if (p < 0) {
      out.status = QpStatus::kOptimal;
      break;
    }
    rows.Normal(p, &np);
    w.u[w.iq] = 0.0;
    w.active[w.iq] = p;

    bool restart = false;
    // Step 2: move along the primal/dual directions until p is satisfied.
    while (!restart) {
      if (++iter > max_iterations) {
        out.status = QpStatus::kIterationLimit;
        break;
      }
      dvec.noalias() = w.j.transpose() * np;
      z.noalias() = w.j.rightCols(n - w.iq) * dvec.tail(n - w.iq);
      for (int i = w.iq - 1; i >= 0; --i) {
        double sum = dvec[i];
        for (int k = i + 1; k < w.iq; ++k) sum -= w.r(i, k) * r[k];
        r[i] = sum / w.r(i, i);
      }

      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < w.iq; ++k) {
        if (r[k] > 0.0) {
          const double ratio = w.u[k] / r[k];
          if (ratio < t1) {
            t1 = ratio;
            drop = k;
          }
        }
      }
      const double s_p = rows.Slack(x, p);
      double t2 = kInf;
      if (z.squaredNorm() > kEps) t2 = -s_p / z.dot(np);

      const double t = std::min(t1, t2);
      if (t == kInf) {
        out.status = QpStatus::kInfeasible;
        restart = true;
        break;
      }
      if (t2 == kInf) {
        // Dual-only step: np is spanned by the active normals.
        for (int k = 0; k < w.iq; ++k) w.u[k] -= t * r[k];
        w.u[w.iq] += t;
        in_active[w.active[drop]] = 0;
        DeleteConstraint(w, drop);
        continue;
      }
      x += t * z;
      for (int k = 0; k < w.iq; ++k) w.u[k] -= t * r[k];
      w.u[w.iq] += t;
      if (t == t2) {
        if (AddConstraint(w, dvec)) {
          in_active[p] = 1;
        } else {
          // Degenerate: p is satisfied with equality but linearly dependent
          // on the working set; fold its multiplier into the active ones.
          w.iq -= 1;
          w.r.col(w.iq).setZero();
          for (int k = 0; k < w.iq; ++k) w.u[k] += r[k] * w.u[w.iq];
          w.u[w.iq] = 0.0;
          excluded[p] = 1;
        }
        restart = true;
      } else {
        in_active[w.active[drop]] = 0;
        DeleteConstraint(w, drop);
      }
    }
    if (out.status == QpStatus::kIterationLimit ||
        out.status == QpStatus::kInfeasible) {
      break;
    }
  }

  out.x = x;
  out.multipliers = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < w.iq; ++k) {
    out.active_set.push_back(w.active[k]);
    out.multipliers[w.active[k]] = w.u[k];
  }
  out.objective = 0.5 * x.dot(hessian * x) + g.dot(x);
  out.iterations = std::max(iter, 0);
  return out;
}

}  // namespace

DualActiveSetQp::DualActiveSetQp(const Eigen::MatrixXd& hessian)
    : hessian_(hessian) {
  if (hessian.rows() != hessian.cols() || hessian.rows() == 0) {
    throw std::invalid_argument("DualActiveSetQp: H must be square");
  }
  if (!hessian.isApprox(hessian.transpose())) {
    throw std::invalid_argument("DualActiveSetQp: H must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("DualActiveSetQp: H must be positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd l_inv = l.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd::Identity(l.rows(), l.cols()));
  inv_chol_t_ = l_inv.transpose();
}

QpResult DualActiveSetQp::Solve(const Eigen::VectorXd& g,
                                const Eigen::MatrixXd& c,
                                const Eigen::VectorXd& d,
                                int max_iterations) const {
  const int n = size();
  const int m = static_cast<int>(c.rows());
  if (g.size() != n || (m > 0 && c.cols() != n) || d.size() != m) {
    throw std::invalid_argument("DualActiveSetQp::Solve: size mismatch");
  }
  return SolveCore(hessian_, inv_chol_t_, g, DenseRows{c, d},
                   max_iterations);
}

QpResult DualActiveSetQp::SolveTwoSided(const Eigen::VectorXd& g,
                                        const Eigen::MatrixXd& a,
                                        const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        int max_iterations) const {
  const int n = size();
  const int m = static_cast<int>(a.rows());
  if (g.size() != n || (m > 0 && a.cols() != n) || lower.size() != m ||
      upper.size() != m) {
    throw std::invalid_argument(
        "DualActiveSetQp::SolveTwoSided: size mismatch");
  }
  return SolveCore(hessian_, inv_chol_t_, g, PairedRows{a, upper, lower, {}},
                   max_iterations);
}

double KktResidual(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                   const Eigen::MatrixXd& c, const Eigen::VectorXd& d,
                   const Eigen::VectorXd& x,
                   const Eigen::VectorXd& multipliers) {
  Eigen::VectorXd grad = h * x + g;
  if (c.rows() > 0) grad.noalias() += c.transpose() * multipliers;
  double worst = grad.cwiseAbs().maxCoeff();
  if (c.rows() == 0) return worst;
  const Eigen::VectorXd s = d - c * x;
  worst = std::max(worst, (-s).maxCoeff());
  worst = std::max(worst, (-multipliers).maxCoeff());
  worst = std::max(worst, multipliers.cwiseProduct(s).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace apf_nav
