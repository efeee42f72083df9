#include "spm/formulation.hpp"

#include <cmath>
#include <stdexcept>

namespace spm {

void validate_spec(const SparsePhaseMaxSpec& spec) {
  const int n = static_cast<int>(spec.phi.size());
  if (n < 1) throw std::invalid_argument("spec: empty anchor");
  if (spec.meas.rows.cols() != n) {
    throw std::invalid_argument("spec: anchor/measurement dimension mismatch");
  }
  if (spec.meas.rows.rows() != spec.meas.m ||
      spec.meas.magnitudes.size() != spec.meas.m || spec.meas.m < 1) {
    throw std::invalid_argument("spec: malformed measurement set");
  }
  if (!(spec.lambda >= 0.0) || !std::isfinite(spec.lambda)) {
    throw std::invalid_argument("spec: lambda must be a nonnegative real");
  }
  if (std::abs(spec.phi.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("spec: anchor must be a unit vector");
  }
  if ((spec.meas.magnitudes.array() < 0.0).any()) {
    throw std::invalid_argument("spec: magnitudes must be nonnegative");
  }
}

LpProblem formulate(const SparsePhaseMaxSpec& spec) {
  validate_spec(spec);
  const int n = static_cast<int>(spec.phi.size());
  const int m = spec.meas.m;

  LpProblem p;
  p.c.resize(2 * n);
  p.c.head(n) = spec.phi;
  p.c.tail(n) = Eigen::VectorXd::Constant(n, -spec.lambda);

  p.G = Eigen::MatrixXd::Zero(2 * m + 2 * n, 2 * n);
  p.h.resize(2 * m + 2 * n);
  p.labels.resize(static_cast<std::size_t>(2 * m + 2 * n));

  p.G.topLeftCorner(m, n) = spec.meas.rows;
  p.G.block(m, 0, m, n) = -spec.meas.rows;
  p.h.head(m) = spec.meas.magnitudes;
  p.h.segment(m, m) = spec.meas.magnitudes;

  const int t0 = 2 * m;
  for (int j = 0; j < n; ++j) {
    p.G(t0 + j, j) = 1.0;       //  x_j - t_j <= 0
    p.G(t0 + j, n + j) = -1.0;
    p.G(t0 + n + j, j) = -1.0;  // -x_j - t_j <= 0
    p.G(t0 + n + j, n + j) = -1.0;
  }
  p.h.tail(2 * n).setZero();

  for (int i = 0; i < m; ++i) p.labels[static_cast<std::size_t>(i)] = RowLabel::UpperMeasurement;
  for (int i = 0; i < m; ++i) p.labels[static_cast<std::size_t>(m + i)] = RowLabel::LowerMeasurement;
  for (int j = 0; j < n; ++j) p.labels[static_cast<std::size_t>(t0 + j)] = RowLabel::TUpper;
  for (int j = 0; j < n; ++j) p.labels[static_cast<std::size_t>(t0 + n + j)] = RowLabel::TLower;
  return p;
}

double objective_value(const SparsePhaseMaxSpec& spec, const Eigen::VectorXd& x) {
  if (x.size() != spec.phi.size()) {
    throw std::invalid_argument("objective_value: dimension mismatch");
  }
  return spec.phi.dot(x) - spec.lambda * x.lpNorm<1>();
}

bool is_feasible(const SparsePhaseMaxSpec& spec, const Eigen::VectorXd& x,
                 double tol) {
  if (x.size() != spec.meas.rows.cols()) {
    throw std::invalid_argument("is_feasible: dimension mismatch");
  }
  if (tol < 0.0) throw std::invalid_argument("is_feasible: tol must be >= 0");
  for (int i = 0; i < spec.meas.m; ++i) {
    if (std::abs(row_dot(spec.meas.rows, i, x)) > spec.meas.magnitudes[i] + tol) {
      return false;
    }
  }
  return true;
}

}  // namespace spm
