#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "spm/model.hpp"

namespace spm {

// Recovery-condition inputs. The universal constants carry no published
// values; they default to 1 and exist so experiments can calibrate
// empirical counterparts.
struct TheoremParams {
  int n = 0;
  int k = 0;
  int m = 0;
  double alpha = 1.0;
  double lambda = 0.0;
  double c1_constant = 1.0;
  double embedding_constant = 1.0;
};

// Admissible l1-weight interval (alpha/(2 sqrt k), 3 alpha/(4 sqrt k)).
// Always lo < hi; the ratio hi/lo is 3/2.
std::pair<double, double> lambda_range(double alpha, int k);

// Strict sparsity condition k < alpha^2 n / 49.
bool sparsity_bound_ok(int k, int n, double alpha);

// Measurement-count threshold (c1/alpha^7) * k * log(n/k), natural log.
// Requires k < n.
double sample_complexity(int k, int n, double alpha, double c1_constant);

// Binary-embedding radius C * ((s/m) * log(2n/s))^(1/5). Requires 0 < s <= n.
double embedding_delta(double s, int m, int n, double embedding_constant);

// true iff <a_i, x0> * <a_i, h> <= tol for every row. For any h with x0 + h
// feasible this holds with tol = 0 in exact arithmetic (per row,
// |u + v| <= |u| forces u*v <= 0).
bool sign_consistency_check(const MeasurementSet& meas, const SparseSignal& x0,
                            const Eigen::VectorXd& h, double tol);

struct OneBitSummary {
  double max_observed_distance = 0.0;
  double delta_predicted = 0.0;
  long long pairs_tested = 0;
  long long pairs_kept = 0;
  int trials = 0;
};

// Monte Carlo illustration of the sign-consistency embedding: per trial,
// draws a fresh Gaussian ensemble and an s-sparse unit vector, then
// rejection-samples perturbed companions (same support, log-uniform
// perturbation scale, 10^4 proposals per trial). Pairs whose measurement
// signs agree on all m rows are kept and the largest kept distance is
// compared against embedding_delta. This estimates the typical-case
// picture only; it is not a verification of the uniform statement.
OneBitSummary one_bit_consistency_experiment(int n, double s, int m, int trials,
                                             std::uint64_t seed);

}  // namespace spm
