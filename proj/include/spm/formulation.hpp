#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spm/model.hpp"

namespace spm {

// Inputs of the recovery program
//
//   maximize  <phi, x> - lambda * ||x||_1
//   s.t.      -b_i <= <a_i, x> <= b_i,   i = 1..m
//
// with b_i the observed magnitudes.
struct SparsePhaseMaxSpec {
  Eigen::VectorXd phi;   // unit anchor vector, length n
  double lambda = 0.0;   // l1 weight, >= 0
  MeasurementSet meas;
};

enum class RowLabel { UpperMeasurement, LowerMeasurement, TUpper, TLower };

// Inequality-form LP over z = (x, t), t the l1 epigraph variables:
//
//   maximize c.z   s.t.  G z <= h
//
// with c = (phi, -lambda*1) and rows, in order:
//   A x <= b, -A x <= b, x - t <= 0, -x - t <= 0
// so any optimum has t_j = |x_j| whenever lambda > 0.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  std::vector<RowLabel> labels;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(h.size()); }
};

// Throws std::invalid_argument on inconsistent dimensions, lambda < 0, or
// || ||phi|| - 1 || > 1e-10.
void validate_spec(const SparsePhaseMaxSpec& spec);

// Exact formulation per the layout above; no scaling or presolve.
LpProblem formulate(const SparsePhaseMaxSpec& spec);

// <phi, x> - lambda * ||x||_1
double objective_value(const SparsePhaseMaxSpec& spec, const Eigen::VectorXd& x);

// true iff |<a_i, x>| <= b_i + tol for every row.
bool is_feasible(const SparsePhaseMaxSpec& spec, const Eigen::VectorXd& x,
                 double tol);

}  // namespace spm
