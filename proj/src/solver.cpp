#include "spm/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spm {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

CertificateReport check_certificate(const LpProblem& p, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& y) {
  if (x.size() != p.c.size() || y.size() != p.h.size()) {
    throw std::invalid_argument("check_certificate: dimension mismatch");
  }
  CertificateReport r;
  r.primal_scale = 1.0 + p.h.lpNorm<Eigen::Infinity>();
  r.dual_scale = 1.0 + p.c.lpNorm<Eigen::Infinity>();

  const Eigen::VectorXd slack = p.h - p.G * x;
  r.primal_violation = (-slack).maxCoeff();
  r.dual_residual = (p.G.transpose() * y - p.c).lpNorm<Eigen::Infinity>();
  r.min_dual = y.minCoeff();
  const double primal_obj = p.c.dot(x);
  const double dual_obj = p.h.dot(y);
  r.relative_gap = std::abs(dual_obj - primal_obj) /
                   (1.0 + std::abs(primal_obj) + std::abs(dual_obj));
  r.complementarity = y.cwiseProduct(slack).lpNorm<Eigen::Infinity>();
  return r;
}

bool check_ray(const LpProblem& p, const Eigen::VectorXd& r,
               const SolverConfig& cfg) {
  if (r.size() != p.c.size()) return false;
  const double rn = r.norm();
  if (!(rn > 0.0) || !r.allFinite()) return false;
  const Eigen::VectorXd unit = r / rn;
  const Eigen::VectorXd gr = p.G * unit;
  for (int i = 0; i < gr.size(); ++i) {
    const double scale = 1.0 + p.G.row(i).norm();
    if (gr[i] > cfg.tol_feas * scale) return false;
  }
  return p.c.dot(unit) > 0.0;
}

namespace {

// Largest step a such that v + a*dv stays nonnegative; +inf when unblocked.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  }
  return a;
}

struct NormalSolver {
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool ok = false;

  // Factors G' diag(d) G, adding an escalating ridge if the factorization
  // reports a numerical issue (near-semidefinite systems appear when the
  // optimal face is unbounded in the epigraph variables).
  void factor(const Eigen::MatrixXd& G, const Eigen::VectorXd& d) {
    const Eigen::MatrixXd scaled = d.cwiseSqrt().asDiagonal() * G;
    Eigen::MatrixXd N(G.cols(), G.cols());
    N.setZero();
    N.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    const double diag_max = std::max(N.diagonal().maxCoeff(), 1.0);
    double ridge = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::MatrixXd Nr = N;
      if (ridge > 0.0) Nr.diagonal().array() += ridge;
      llt.compute(Nr.selfadjointView<Eigen::Lower>());
      if (llt.info() == Eigen::Success) {
        ok = true;
        return;
      }
      ridge = (ridge == 0.0) ? 1e-14 * diag_max : ridge * 1e3;
    }
    ok = false;
  }
};

}  // namespace

LpSolution solve(const LpProblem& p, const SolverConfig& cfg) {
  const int nvars = p.num_vars();
  const int nrows = p.num_rows();
  if (nvars < 1 || nrows < 1 || p.G.rows() != nrows || p.G.cols() != nvars) {
    throw std::invalid_argument("solve: inconsistent problem dimensions");
  }
  if (!(cfg.tol_gap > 0.0) || !(cfg.tol_feas > 0.0) || cfg.max_iters < 1) {
    throw std::invalid_argument("solve: invalid solver configuration");
  }

  LpSolution sol;

  // Zero right-hand sides on measurement rows pin <a_i, x> = 0 with an empty
  // interior; relax them internally and let the final certificate check run
  // against the original data (the relaxation sits far below tol_feas).
  Eigen::VectorXd h = p.h;
  if (!p.labels.empty() && p.labels.size() == static_cast<std::size_t>(nrows)) {
    for (int i = 0; i < nrows; ++i) {
      const RowLabel l = p.labels[static_cast<std::size_t>(i)];
      if ((l == RowLabel::UpperMeasurement || l == RowLabel::LowerMeasurement) &&
          h[i] == 0.0) {
        h[i] = 1e-10;
      }
    }
  }

  const double h_inf = p.h.lpNorm<Eigen::Infinity>();
  const double slack_floor = 1e-3 * (1.0 + h_inf);

  // Start at z = 0 with the epigraph coordinates raised to slack_floor when
  // the canonical layout is known; slacks are floored, so the start may be
  // (mildly) primal-infeasible and the residuals contract along the way.
  Eigen::VectorXd z = Eigen::VectorXd::Zero(nvars);
  if (!p.labels.empty() && nvars % 2 == 0) {
    bool canonical = true;
    for (std::size_t i = 0; i < p.labels.size() && canonical; ++i) {
      if (p.labels[i] == RowLabel::TUpper || p.labels[i] == RowLabel::TLower) {
        canonical = static_cast<int>(i) >= nrows - nvars;
      }
    }
    if (canonical) z.tail(nvars / 2).setConstant(slack_floor);
  }
  Eigen::VectorXd s = (h - p.G * z).cwiseMax(slack_floor);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(nrows);

  Eigen::VectorXd best_ray;
  const auto remember_ray = [&](const Eigen::VectorXd& dir) {
    if (best_ray.size() == 0 && check_ray(p, dir, cfg)) {
      best_ray = dir / dir.norm();
    }
  };

  for (int iter = 0; iter <= cfg.max_iters; ++iter) {
    if (!z.allFinite() || !s.allFinite() || !y.allFinite()) {
      sol.status = SolveStatus::NumericalFailure;
      sol.iterations = iter;
      return sol;
    }

    // Certified exit: the independent check is the only way to report Optimal.
    const CertificateReport report = check_certificate(p, z, y);
    sol.gap = report.relative_gap;
    if (report.passes(cfg)) {
      sol.status = SolveStatus::Optimal;
      sol.x_hat = z;
      sol.objective = p.c.dot(z);
      sol.dual = y;
      sol.iterations = iter;
      return sol;
    }

    // Divergence exit: only with a checkable ray in hand.
    if (std::abs(p.c.dot(z)) > cfg.unbounded_threshold) {
      if (best_ray.size() > 0) {
        sol.status = SolveStatus::Unbounded;
        sol.ray = best_ray;
        sol.iterations = iter;
        return sol;
      }
      sol.status = SolveStatus::NumericalFailure;
      sol.iterations = iter;
      return sol;
    }
    if (iter == cfg.max_iters) break;

    const Eigen::VectorXd r_p = p.G * z + s - h;
    const Eigen::VectorXd r_d = p.G.transpose() * y - p.c;
    const double mu = s.dot(y) / nrows;

    const Eigen::VectorXd d = y.cwiseQuotient(s);
    NormalSolver normal;
    normal.factor(p.G, d);
    if (!normal.ok) {
      sol.status = SolveStatus::NumericalFailure;
      sol.iterations = iter;
      return sol;
    }

    // Affine-scaling predictor: target s.y -> 0.
    const Eigen::VectorXd w_aff = d.cwiseProduct(r_p) - y;
    const Eigen::VectorXd dz_aff = normal.llt.solve(-r_d - p.G.transpose() * w_aff);
    const Eigen::VectorXd gdz_aff = p.G * dz_aff;
    const Eigen::VectorXd ds_aff = -r_p - gdz_aff;
    const Eigen::VectorXd dy_aff = w_aff + d.cwiseProduct(gdz_aff);

    if (p.c.dot(dz_aff) > 0.0) remember_ray(dz_aff);

    const double ap_aff = std::min(1.0, max_step(s, ds_aff));
    const double ad_aff = std::min(1.0, max_step(y, dy_aff));
    const double mu_aff =
        (s + ap_aff * ds_aff).dot(y + ad_aff * dy_aff) / nrows;
    double sigma = mu > 0.0 ? std::pow(mu_aff / mu, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector: target s.y + ds_aff.dy_aff - sigma*mu.
    const Eigen::VectorXd comp =
        s.cwiseProduct(y) + ds_aff.cwiseProduct(dy_aff) -
        Eigen::VectorXd::Constant(nrows, sigma * mu);
    const Eigen::VectorXd w = d.cwiseProduct(r_p) - comp.cwiseQuotient(s);
    const Eigen::VectorXd dz = normal.llt.solve(-r_d - p.G.transpose() * w);
    const Eigen::VectorXd gdz = p.G * dz;
    const Eigen::VectorXd ds = -r_p - gdz;
    const Eigen::VectorXd dy = w + d.cwiseProduct(gdz);

    if (p.c.dot(dz) > 0.0) remember_ray(dz);

    const double ap_raw = max_step(s, ds);
    const double ad_raw = max_step(y, dy);
    double ap = 0.99 * ap_raw;
    const double ad = std::min(1.0, 0.99 * ad_raw);

    if (std::isinf(ap_raw)) {
      // Nothing blocks the primal step: push the iterate past the divergence
      // threshold along the improving direction and let the ray test decide.
      const double rate = p.c.dot(dz);
      ap = rate > 0.0 ? (2.0 * cfg.unbounded_threshold + std::abs(p.c.dot(z))) /
                            rate
                      : 1.0;
    } else {
      ap = std::min(1.0, ap);
    }

    z += ap * dz;
    s += ap * ds;
    y += ad * dy;
  }

  sol.status = SolveStatus::NumericalFailure;
  sol.iterations = cfg.max_iters;
  return sol;
}

}  // namespace spm
