#include "spm/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spm {

namespace {

// Visits all size-r index subsets of {0..total-1} in lexicographic order.
template <typename F>
void for_each_subset(int total, int r, F&& visit) {
  std::vector<int> pick(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = i;
  for (;;) {
    visit(pick);
    int i = r - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - r + i) --i;
    if (i < 0) return;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

bool improving_ray(const LpProblem& p, const Eigen::VectorXd& dir, double row_tol,
                   double obj_tol) {
  const double nrm = dir.norm();
  if (!(nrm > 0.0) || !dir.allFinite()) return false;
  const Eigen::VectorXd r = dir / nrm;
  const Eigen::VectorXd gr = p.G * r;
  for (int i = 0; i < gr.size(); ++i) {
    if (gr[i] > row_tol * (1.0 + p.G.row(i).norm())) return false;
  }
  return p.c.dot(r) > obj_tol;
}

}  // namespace

LpSolution solve_exhaustive(const LpProblem& p) {
  const int d = p.num_vars();
  const int rows = p.num_rows();
  if (d < 1 || rows < 1 || p.G.rows() != rows || p.G.cols() != d) {
    throw std::invalid_argument("solve_exhaustive: inconsistent dimensions");
  }
  if (d > 8 || rows > 24) {
    throw std::invalid_argument("solve_exhaustive: instance too large for enumeration");
  }

  const double h_scale = 1.0 + p.h.lpNorm<Eigen::Infinity>();
  const double feas_tol = 1e-9 * h_scale;
  const double ray_row_tol = 1e-9;
  const double ray_obj_tol = 1e-9 * (1.0 + p.c.norm());

  LpSolution sol;
  sol.status = SolveStatus::NumericalFailure;

  // Recession-cone probes first: an improving ray settles the status no
  // matter what the vertex scan finds.
  if (rows >= d - 1 && d >= 2) {
    bool found = false;
    for_each_subset(rows, d - 1, [&](const std::vector<int>& pick) {
      if (found) return;
      Eigen::MatrixXd sub(d - 1, d);
      for (int i = 0; i < d - 1; ++i) sub.row(i) = p.G.row(pick[static_cast<std::size_t>(i)]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      lu.setThreshold(1e-10);
      if (lu.rank() != d - 1) return;  // degenerate subsystem, skip
      const Eigen::MatrixXd kernel = lu.kernel();
      if (kernel.cols() != 1) return;
      const Eigen::VectorXd dir = kernel.col(0);
      if (improving_ray(p, dir, ray_row_tol, ray_obj_tol)) {
        sol.ray = dir / dir.norm();
        found = true;
      } else if (improving_ray(p, -dir, ray_row_tol, ray_obj_tol)) {
        sol.ray = -dir / dir.norm();
        found = true;
      }
    });
    if (found) {
      sol.status = SolveStatus::Unbounded;
      return sol;
    }
  }

  // Sign-pattern grid over {-1,0,1}^d as a second ray sweep.
  {
    long long total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    for (long long code = 1; code < total; ++code) {
      long long c = code;
      Eigen::VectorXd dir(d);
      for (int i = 0; i < d; ++i) {
        dir[i] = static_cast<double>(c % 3 - 1);
        c /= 3;
      }
      if (improving_ray(p, dir, ray_row_tol, ray_obj_tol)) {
        sol.ray = dir / dir.norm();
        sol.status = SolveStatus::Unbounded;
        return sol;
      }
    }
  }

  // Vertex scan: solve each square active subsystem and keep the best
  // feasible solution.
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z;
  if (rows >= d) {
    for_each_subset(rows, d, [&](const std::vector<int>& pick) {
      Eigen::MatrixXd sub(d, d);
      Eigen::VectorXd rhs(d);
      for (int i = 0; i < d; ++i) {
        sub.row(i) = p.G.row(pick[static_cast<std::size_t>(i)]);
        rhs[i] = p.h[pick[static_cast<std::size_t>(i)]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      lu.setThreshold(1e-10);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd z = lu.solve(rhs);
      if (!z.allFinite()) return;
      if ((sub * z - rhs).lpNorm<Eigen::Infinity>() > 1e-7 * (h_scale + z.norm())) {
        return;  // ill-conditioned solve, discard
      }
      if (((p.G * z - p.h).array() > feas_tol).any()) return;
      const double obj = p.c.dot(z);
      if (obj > best) {
        best = obj;
        best_z = z;
      }
    });
  }

  if (best_z.size() > 0) {
    sol.status = SolveStatus::Optimal;
    sol.x_hat = best_z;
    sol.objective = best;
    sol.gap = 0.0;
    return sol;
  }
  return sol;  // inconclusive
}

}  // namespace spm
