#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spm/model.hpp"
#include "spm/solver.hpp"

namespace spm {

enum class LambdaMode { PaperMidpoint, Explicit };

struct TrialConfig {
  int n = 0;
  int k = 0;
  int m = 0;
  double alpha = 1.0;
  LambdaMode lambda_mode = LambdaMode::PaperMidpoint;
  double lambda = 0.0;  // used only in Explicit mode
  SignalDistribution dist;
  double success_tol = 1e-5;  // relative recovery tolerance
  SolverConfig solver;
  std::uint64_t seed = 0;
};

// PaperMidpoint resolves to the midpoint 0.625 * alpha / sqrt(k) of the
// admissible open interval.
double resolve_lambda(const TrialConfig& config);

struct TrialRecord {
  int n = 0, k = 0, m = 0;
  double alpha = 0.0;
  double lambda = 0.0;  // resolved value
  int trial_index = 0;
  std::uint64_t trial_seed = 0;
  SolveStatus status = SolveStatus::NumericalFailure;
  double rel_error = 0.0;               // valid iff status == Optimal
  bool success = false;                 // rel_error <= success_tol
  double objective_gap_vs_truth = 0.0;  // valid iff status == Optimal
  double wall_time = 0.0;               // seconds, measured
  int iterations = 0;
};

// Generates signal, measurements and anchor from a per-trial seed derived
// as derive_seed(config.seed, cell_index, trial_index), solves the program
// and scores the result against the ground truth (error up to global sign).
// Solver failures become records with success = false, never exceptions.
TrialRecord run_trial_in_cell(const TrialConfig& config, int trial_index,
                              int cell_index);
TrialRecord run_trial(const TrialConfig& config, int trial_index);

enum class SweepAxis { M, K, Alpha, Lambda, N };

SweepAxis parse_axis(const std::string& name);  // throws on unknown axis
std::string axis_name(SweepAxis axis);
TrialConfig apply_axis(TrialConfig base, SweepAxis axis, double value);

struct SweepPoint {
  double value = 0.0;
  double success_rate = 0.0;
  double mean_rel_error = 0.0;  // over optimal trials; NaN when none
};

struct SweepResult {
  SweepAxis axis = SweepAxis::M;
  std::vector<double> grid;
  int trials_per_cell = 0;
  std::vector<SweepPoint> points;       // grid order
  std::vector<TrialRecord> records;     // cell-major, trial-minor
};

// Runs trials for every grid value. `jobs` threads share the (cell, trial)
// slots; outputs are identical for any jobs >= 1.
SweepResult run_sweep(const TrialConfig& base, SweepAxis axis,
                      const std::vector<double>& grid, int trials,
                      int jobs = 1);

struct PhaseDiagram {
  SweepAxis axis1 = SweepAxis::M;
  SweepAxis axis2 = SweepAxis::K;
  std::vector<double> grid1;
  std::vector<double> grid2;
  int trials_per_cell = 0;
  std::vector<std::vector<double>> success_rate;  // [i][j], axis1-major
  std::vector<TrialRecord> records;               // cell-major, trial-minor
};

PhaseDiagram phase_diagram(const TrialConfig& base, SweepAxis axis1,
                           const std::vector<double>& grid1, SweepAxis axis2,
                           const std::vector<double>& grid2, int trials,
                           int jobs = 1);

// File formats. Records CSV header:
//   axis1,axis2,trial,seed,status,rel_error,success,objective_gap,wall_time
// One row per trial; axis columns are empty when an axis does not apply.
// wall_time is written as 0 unless include_timing is set, keeping default
// outputs byte-reproducible.
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records,
                       const std::vector<std::string>& axis1_per_record,
                       const std::vector<std::string>& axis2_per_record,
                       bool include_timing);
void write_sweep_records_csv(std::ostream& out, const SweepResult& sweep,
                             bool include_timing);
void write_sweep_summary_csv(std::ostream& out, const SweepResult& sweep);
void write_diagram_records_csv(std::ostream& out, const PhaseDiagram& diagram,
                               bool include_timing);
void write_diagram_summary_csv(std::ostream& out, const PhaseDiagram& diagram);
void write_diagram_json(std::ostream& out, const PhaseDiagram& diagram);

// Locale-independent shortest round-trip formatting used by all writers.
std::string format_double(double v);

}  // namespace spm
