#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "spm/formulation.hpp"
#include "spm/harness.hpp"

namespace spm {

// On-disk problem instance. Scalars always present; the arrays are optional
// on input (anything missing is regenerated from the seed) and always
// materialized on output.
struct ProblemInstance {
  int n = 0;
  int k = 0;
  int m = 0;
  double alpha = 1.0;
  double lambda = 0.0;  // resolved value
  std::uint64_t seed = 0;
  SignalDistribution dist;

  std::optional<Eigen::VectorXd> signal;      // length n
  std::optional<Eigen::MatrixXd> rows;        // m x n
  std::optional<Eigen::VectorXd> magnitudes;  // length m
  std::optional<Eigen::VectorXd> phi;         // length n
};

std::string dist_to_string(const SignalDistribution& dist);
SignalDistribution dist_from_string(const std::string& name,
                                    std::vector<double> provided);

// Fills any missing array from (n, k, m, alpha, seed, dist), using the same
// seed derivation as the trial harness (cell 0, trial 0).
void materialize(ProblemInstance& inst);

// Generates a full instance; lambda_mode resolves exactly as in TrialConfig.
ProblemInstance build_instance(int n, int k, int m, double alpha,
                               LambdaMode lambda_mode, double lambda,
                               const SignalDistribution& dist,
                               std::uint64_t seed);

nlohmann::json instance_to_json(const ProblemInstance& inst);
// Throws std::runtime_error on malformed input (missing fields, length
// mismatches, invalid values).
ProblemInstance instance_from_json(const nlohmann::json& j);

// Spec over the instance data; materializes missing arrays first.
SparsePhaseMaxSpec spec_from_instance(const ProblemInstance& inst);

// {status, x_hat, objective, gap, iterations}; x_hat holds the recovered
// signal coordinates (first n entries of the decision vector).
nlohmann::json solution_to_json(const LpSolution& sol, int n);

std::string read_text_file(const std::string& path);   // throws on failure
void write_text_file(const std::string& path, const std::string& content);

}  // namespace spm
