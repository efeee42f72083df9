#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spm {

// How the nonzero entries of a generated signal are drawn.
struct SignalDistribution {
  enum class Kind { GaussianNonzeros, UnitMagnitudeSigns, ProvidedValues };

  Kind kind = Kind::GaussianNonzeros;
  std::vector<double> provided;  // used only by ProvidedValues

  static SignalDistribution gaussian_nonzeros() { return {}; }
  static SignalDistribution unit_magnitude_signs() {
    return {Kind::UnitMagnitudeSigns, {}};
  }
  static SignalDistribution provided_values(std::vector<double> values) {
    return {Kind::ProvidedValues, std::move(values)};
  }
};

// k-sparse ground-truth vector; `support` holds the k indices that carry the
// nonzero entries, in increasing order.
struct SparseSignal {
  int n = 0;
  int k = 0;
  Eigen::VectorXd values;
  std::vector<int> support;

  double norm2() const { return values.norm(); }
};

// Measurement ensemble {a_i} (one per row) together with the observed
// magnitudes b_i = |<a_i, x0>|.
struct MeasurementSet {
  int m = 0;
  Eigen::MatrixXd rows;        // m x n
  Eigen::VectorXd magnitudes;  // length m, nonnegative
};

// Unit vector phi with its recorded target correlation alpha against the
// normalized signal.
struct AnchorVector {
  Eigen::VectorXd phi;
  double alpha = 0.0;
};

// Single dot-product path shared by measurement generation and feasibility
// checks, so a stored magnitude compares bit-exactly against a recomputation
// on the same inputs.
inline double row_dot(const Eigen::MatrixXd& rows, int i,
                      const Eigen::VectorXd& x) {
  return rows.row(i).dot(x);
}

// Draws a uniformly random size-k support and fills it per `dist`.
// Deterministic in (arguments, seed). Throws std::invalid_argument unless
// 1 <= k <= n (and, for ProvidedValues, a zero-free length-k value list).
SparseSignal generate_sparse_signal(int n, int k, const SignalDistribution& dist,
                                    std::uint64_t seed);

// i.i.d. standard normal rows (filled row by row, coordinate by coordinate)
// and magnitudes b_i = |<a_i, x0>|.
MeasurementSet generate_measurements(const SparseSignal& x0, int m,
                                     std::uint64_t seed);

// Builds a MeasurementSet from explicit rows, recomputing the magnitudes
// against x0_values through the shared dot path.
MeasurementSet measurements_from_rows(Eigen::MatrixXd rows,
                                      const Eigen::VectorXd& x0_values);

// phi = alpha*u + sqrt(1-alpha^2)*w with u = x0/||x0|| and w uniform on the
// unit sphere of the complement of u (Gaussian draw projected and
// normalized; a zero projection is resampled). alpha = 1 returns u itself.
AnchorVector make_anchor(const SparseSignal& x0, double alpha,
                         std::uint64_t seed);

// Support estimate by the largest k values of (1/m) sum_i b_i^2 a_ij^2,
// followed by power iteration on the support-restricted weighted covariance
// (1/m) sum_i b_i^2 a_i a_i^T. Returns a unit vector zero-extended to length
// n; its global sign carries no information. Throws std::runtime_error if
// power iteration has not converged after 1000 iterations (tolerance 1e-8 on
// the iterate change).
Eigen::VectorXd heuristic_initializer(const MeasurementSet& meas, int k);

}  // namespace spm
