#pragma once

#include <Eigen/Dense>
#include <string>

#include "spm/formulation.hpp"

namespace spm {

enum class SolveStatus { Optimal, Unbounded, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolverConfig {
  double tol_gap = 1e-8;              // relative duality gap
  double tol_feas = 1e-8;             // primal/dual residual, relative
  int max_iters = 200;
  double unbounded_threshold = 1e12;  // objective magnitude treated as divergence
};

struct LpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x_hat;   // decision vector, present iff Optimal
  double objective = 0.0;  // present iff Optimal
  double gap = 0.0;        // achieved relative duality gap
  int iterations = 0;
  Eigen::VectorXd dual;    // certificate y >= 0, present iff Optimal
  Eigen::VectorXd ray;     // unit improving ray, present iff Unbounded
};

// Independent re-check of an (x, y) pair against the problem data. Computed
// from scratch so tests can audit solver output without trusting its loop.
struct CertificateReport {
  double primal_violation = 0.0;  // max_i (G x - h)_i
  double dual_residual = 0.0;     // ||G'y - c||_inf
  double min_dual = 0.0;          // min_i y_i
  double relative_gap = 0.0;      // |h'y - c'x| / (1 + |c'x| + |h'y|)
  double complementarity = 0.0;   // max_i |y_i (h - G x)_i|
  double primal_scale = 1.0;      // 1 + ||h||_inf
  double dual_scale = 1.0;        // 1 + ||c||_inf

  bool passes(const SolverConfig& cfg) const {
    return primal_violation <= cfg.tol_feas * primal_scale &&
           dual_residual <= cfg.tol_feas * dual_scale && min_dual >= 0.0 &&
           relative_gap <= cfg.tol_gap;
  }
};

CertificateReport check_certificate(const LpProblem& problem,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y);

// true iff r is a checkable improving ray: G r <= tol_feas (per row, r unit
// scaled) and c'r > 0.
bool check_ray(const LpProblem& problem, const Eigen::VectorXd& r,
               const SolverConfig& cfg);

// Primal-dual interior-point solve (Mehrotra predictor-corrector on the
// inequality form, dense normal equations). Returns Optimal only when the
// final iterate passes check_certificate; returns Unbounded only with a ray
// that passes check_ray.
LpSolution solve(const LpProblem& problem, const SolverConfig& cfg = {});

}  // namespace spm
