#include "spm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spm/rng.hpp"

namespace spm {

namespace {

std::vector<int> sample_support(int n, int k, Rng& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // partial Fisher-Yates: the first k entries become the support
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SparseSignal generate_sparse_signal(int n, int k, const SignalDistribution& dist,
                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_sparse_signal: n must be >= 1");
  if (k < 1 || k > n) {
    throw std::invalid_argument("generate_sparse_signal: need 1 <= k <= n, got k=" +
                                std::to_string(k) + ", n=" + std::to_string(n));
  }
  if (dist.kind == SignalDistribution::Kind::ProvidedValues) {
    if (static_cast<int>(dist.provided.size()) != k) {
      throw std::invalid_argument(
          "generate_sparse_signal: provided-values needs exactly k values");
    }
    for (double v : dist.provided) {
      if (v == 0.0 || !std::isfinite(v)) {
        throw std::invalid_argument(
            "generate_sparse_signal: provided values must be finite and nonzero");
      }
    }
  }

  Rng rng(seed);
  SparseSignal sig;
  sig.n = n;
  sig.k = k;
  sig.support = sample_support(n, k, rng);
  sig.values = Eigen::VectorXd::Zero(n);

  for (int i = 0; i < k; ++i) {
    double v = 0.0;
    switch (dist.kind) {
      case SignalDistribution::Kind::GaussianNonzeros:
        do {
          v = rng.gaussian();
        } while (v == 0.0);
        break;
      case SignalDistribution::Kind::UnitMagnitudeSigns:
        v = (rng.next_u64() & 1u) ? 1.0 : -1.0;
        break;
      case SignalDistribution::Kind::ProvidedValues:
        v = dist.provided[static_cast<std::size_t>(i)];
        break;
    }
    sig.values[sig.support[static_cast<std::size_t>(i)]] = v;
  }
  return sig;
}

MeasurementSet generate_measurements(const SparseSignal& x0, int m,
                                     std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate_measurements: m must be >= 1");
  if (x0.values.size() != x0.n || x0.n < 1) {
    throw std::invalid_argument("generate_measurements: malformed signal");
  }

  Rng rng(seed);
  MeasurementSet meas;
  meas.m = m;
  meas.rows.resize(m, x0.n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < x0.n; ++j) {
      meas.rows(i, j) = rng.gaussian();
    }
  }
  meas.magnitudes.resize(m);
  for (int i = 0; i < m; ++i) {
    meas.magnitudes[i] = std::abs(row_dot(meas.rows, i, x0.values));
  }
  return meas;
}

MeasurementSet measurements_from_rows(Eigen::MatrixXd rows,
                                      const Eigen::VectorXd& x0_values) {
  if (rows.cols() != x0_values.size()) {
    throw std::invalid_argument("measurements_from_rows: dimension mismatch");
  }
  MeasurementSet meas;
  meas.m = static_cast<int>(rows.rows());
  meas.rows = std::move(rows);
  meas.magnitudes.resize(meas.m);
  for (int i = 0; i < meas.m; ++i) {
    meas.magnitudes[i] = std::abs(row_dot(meas.rows, i, x0_values));
  }
  return meas;
}

AnchorVector make_anchor(const SparseSignal& x0, double alpha,
                         std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("make_anchor: alpha must lie in (0, 1]");
  }
  const double nrm = x0.values.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("make_anchor: zero signal");
  if (alpha < 1.0 && x0.n < 2) {
    throw std::invalid_argument("make_anchor: alpha < 1 requires n >= 2");
  }

  const Eigen::VectorXd u = x0.values / nrm;
  if (alpha == 1.0) return {u, 1.0};

  Rng rng(seed);
  Eigen::VectorXd w(x0.n);
  for (;;) {
    for (int j = 0; j < x0.n; ++j) w[j] = rng.gaussian();
    w -= u.dot(w) * u;
    const double wn = w.norm();
    if (wn > 1e-12) {
      w /= wn;
      break;
    }
    // degenerate projection; resample (probability-zero event)
  }
  AnchorVector anchor;
  anchor.phi = alpha * u + std::sqrt(1.0 - alpha * alpha) * w;
  anchor.alpha = alpha;
  return anchor;
}

Eigen::VectorXd heuristic_initializer(const MeasurementSet& meas, int k) {
  const int n = static_cast<int>(meas.rows.cols());
  const int m = meas.m;
  if (m < 1) throw std::invalid_argument("heuristic_initializer: m must be >= 1");
  if (k < 1 || k > n) {
    throw std::invalid_argument("heuristic_initializer: need 1 <= k <= n");
  }

  const Eigen::VectorXd b2 = meas.magnitudes.cwiseAbs2();
  const Eigen::VectorXd scores =
      (meas.rows.cwiseAbs2().transpose() * b2) / static_cast<double>(m);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<int> support(order.begin(), order.begin() + k);
  std::sort(support.begin(), support.end());

  Eigen::MatrixXd restricted(m, k);
  for (int j = 0; j < k; ++j) restricted.col(j) = meas.rows.col(support[j]);
  const Eigen::MatrixXd weighted =
      (restricted.transpose() * b2.asDiagonal() * restricted) /
      static_cast<double>(m);

  Eigen::VectorXd v = Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(double(k)));
  bool converged = false;
  for (int iter = 0; iter < 1000; ++iter) {
    Eigen::VectorXd next = weighted * v;
    const double nn = next.norm();
    if (nn == 0.0) {
      converged = true;  // zero operator: every vector is an eigenvector
      break;
    }
    next /= nn;
    const double change = (next - v).lpNorm<Eigen::Infinity>();
    v = next;
    if (change <= 1e-8) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error(
        "heuristic_initializer: power iteration did not converge in 1000 iterations");
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < k; ++j) out[support[j]] = v[j];
  return out;
}

}  // namespace spm
