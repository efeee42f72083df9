#include "spm/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "spm/rng.hpp"

namespace spm {

std::pair<double, double> lambda_range(double alpha, int k) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("lambda_range: alpha must lie in (0, 1]");
  }
  if (k < 1) throw std::invalid_argument("lambda_range: k must be >= 1");
  const double root_k = std::sqrt(static_cast<double>(k));
  return {0.5 * alpha / root_k, 0.75 * alpha / root_k};
}

bool sparsity_bound_ok(int k, int n, double alpha) {
  if (k < 1 || n < 1 || !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("sparsity_bound_ok: invalid arguments");
  }
  return static_cast<double>(k) < alpha * alpha * static_cast<double>(n) / 49.0;
}

double sample_complexity(int k, int n, double alpha, double c1_constant) {
  if (k < 1 || !(alpha > 0.0 && alpha <= 1.0) || !(c1_constant > 0.0)) {
    throw std::invalid_argument("sample_complexity: invalid arguments");
  }
  if (k >= n) throw std::invalid_argument("sample_complexity: requires k < n");
  return c1_constant / std::pow(alpha, 7) * static_cast<double>(k) *
         std::log(static_cast<double>(n) / static_cast<double>(k));
}

double embedding_delta(double s, int m, int n, double embedding_constant) {
  if (!(s > 0.0) || m < 1 || n < 1 || !(embedding_constant > 0.0)) {
    throw std::invalid_argument("embedding_delta: invalid arguments");
  }
  if (s > static_cast<double>(n)) {
    throw std::invalid_argument("embedding_delta: requires s <= n");
  }
  return embedding_constant *
         std::pow(s / static_cast<double>(m) *
                      std::log(2.0 * static_cast<double>(n) / s),
                  0.2);
}

bool sign_consistency_check(const MeasurementSet& meas, const SparseSignal& x0,
                            const Eigen::VectorXd& h, double tol) {
  if (h.size() != x0.values.size() || meas.rows.cols() != x0.values.size()) {
    throw std::invalid_argument("sign_consistency_check: dimension mismatch");
  }
  if (tol < 0.0) throw std::invalid_argument("sign_consistency_check: tol < 0");
  for (int i = 0; i < meas.m; ++i) {
    const double u = row_dot(meas.rows, i, x0.values);
    const double v = row_dot(meas.rows, i, h);
    if (u * v > tol) return false;
  }
  return true;
}

OneBitSummary one_bit_consistency_experiment(int n, double s, int m, int trials,
                                             std::uint64_t seed) {
  if (n < 1 || m < 1 || trials < 1) {
    throw std::invalid_argument("one_bit_consistency_experiment: invalid arguments");
  }
  if (!(s > 0.0) || s > static_cast<double>(n)) {
    throw std::invalid_argument("one_bit_consistency_experiment: need 0 < s <= n");
  }
  const int s_int = std::max(1, static_cast<int>(std::floor(s)));
  constexpr int kProposalsPerTrial = 10000;

  OneBitSummary summary;
  summary.trials = trials;
  summary.delta_predicted = embedding_delta(s, m, n, 1.0);

  for (int t = 0; t < trials; ++t) {
    const SparseSignal base = generate_sparse_signal(
        n, s_int, SignalDistribution::gaussian_nonzeros(),
        derive_seed(seed, static_cast<std::uint64_t>(t), 1));
    const MeasurementSet meas = generate_measurements(
        base, m, derive_seed(seed, static_cast<std::uint64_t>(t), 2));
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t), 3));

    Eigen::VectorXd xs(s_int);
    Eigen::MatrixXd cols(m, s_int);
    for (int j = 0; j < s_int; ++j) {
      xs[j] = base.values[base.support[static_cast<std::size_t>(j)]];
      cols.col(j) = meas.rows.col(base.support[static_cast<std::size_t>(j)]);
    }
    xs /= xs.norm();
    const Eigen::VectorXd proj = cols * xs;

    const double log_lo = std::log(1e-3);
    const double log_hi = std::log(2.0);
    Eigen::VectorXd cand(s_int);
    for (int prop = 0; prop < kProposalsPerTrial; ++prop) {
      const double scale = std::exp(log_lo + rng.uniform() * (log_hi - log_lo));
      for (int j = 0; j < s_int; ++j) cand[j] = xs[j] + scale * rng.gaussian();
      const double nn = cand.norm();
      if (!(nn > 0.0)) continue;
      cand /= nn;
      ++summary.pairs_tested;

      const Eigen::VectorXd proj_cand = cols * cand;
      bool agree = true;
      for (int i = 0; i < m; ++i) {
        if (proj[i] * proj_cand[i] < 0.0) {
          agree = false;
          break;
        }
      }
      if (!agree) continue;
      ++summary.pairs_kept;
      const double dist = (cand - xs).norm();
      if (dist > summary.max_observed_distance) {
        summary.max_observed_distance = dist;
      }
    }
  }
  return summary;
}

}  // namespace spm
