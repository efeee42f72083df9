#include "spm/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "spm/formulation.hpp"
#include "spm/rng.hpp"

namespace spm {

namespace {

void validate_config(const TrialConfig& c) {
  if (c.n < 1 || c.k < 1 || c.k > c.n || c.m < 1) {
    throw std::invalid_argument("trial config: need 1 <= k <= n and m >= 1");
  }
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) {
    throw std::invalid_argument("trial config: alpha must lie in (0, 1]");
  }
  if (!(c.success_tol > 0.0)) {
    throw std::invalid_argument("trial config: success_tol must be > 0");
  }
  if (c.lambda_mode == LambdaMode::Explicit &&
      (!(c.lambda >= 0.0) || !std::isfinite(c.lambda))) {
    throw std::invalid_argument("trial config: explicit lambda must be >= 0");
  }
}

}  // namespace

double resolve_lambda(const TrialConfig& config) {
  if (config.lambda_mode == LambdaMode::Explicit) return config.lambda;
  return 0.625 * config.alpha / std::sqrt(static_cast<double>(config.k));
}

TrialRecord run_trial_in_cell(const TrialConfig& config, int trial_index,
                              int cell_index) {
  validate_config(config);
  const auto t_start = std::chrono::steady_clock::now();

  TrialRecord rec;
  rec.n = config.n;
  rec.k = config.k;
  rec.m = config.m;
  rec.alpha = config.alpha;
  rec.lambda = resolve_lambda(config);
  rec.trial_index = trial_index;
  rec.trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(cell_index),
                               static_cast<std::uint64_t>(trial_index));
  rec.rel_error = std::numeric_limits<double>::quiet_NaN();
  rec.objective_gap_vs_truth = std::numeric_limits<double>::quiet_NaN();

  const SparseSignal x0 = generate_sparse_signal(
      config.n, config.k, config.dist, derive_seed(rec.trial_seed, 0, 1));
  const MeasurementSet meas =
      generate_measurements(x0, config.m, derive_seed(rec.trial_seed, 0, 2));
  const AnchorVector anchor =
      make_anchor(x0, config.alpha, derive_seed(rec.trial_seed, 0, 3));

  SparsePhaseMaxSpec spec{anchor.phi, rec.lambda, meas};
  const LpProblem problem = formulate(spec);
  const LpSolution sol = solve(problem, config.solver);

  rec.status = sol.status;
  rec.iterations = sol.iterations;
  if (sol.status == SolveStatus::Optimal) {
    const Eigen::VectorXd x = sol.x_hat.head(config.n);
    const double truth_norm = x0.values.norm();
    rec.rel_error = std::min((x - x0.values).norm(), (x + x0.values).norm()) /
                    truth_norm;
    rec.success = rec.rel_error <= config.success_tol;
    rec.objective_gap_vs_truth =
        objective_value(spec, x) - objective_value(spec, x0.values);
  }

  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rec;
}

TrialRecord run_trial(const TrialConfig& config, int trial_index) {
  return run_trial_in_cell(config, trial_index, 0);
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "m") return SweepAxis::M;
  if (name == "k") return SweepAxis::K;
  if (name == "alpha") return SweepAxis::Alpha;
  if (name == "lambda") return SweepAxis::Lambda;
  if (name == "n") return SweepAxis::N;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::M: return "m";
    case SweepAxis::K: return "k";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::N: return "n";
  }
  return "?";
}

namespace {

int as_positive_int(double value, const char* what) {
  const double r = std::round(value);
  if (!(r >= 1.0) || std::abs(value - r) > 1e-9) {
    throw std::invalid_argument(std::string("grid value for ") + what +
                                " must be a positive integer");
  }
  return static_cast<int>(r);
}

}  // namespace

TrialConfig apply_axis(TrialConfig base, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::M:
      base.m = as_positive_int(value, "m");
      break;
    case SweepAxis::K:
      base.k = as_positive_int(value, "k");
      break;
    case SweepAxis::N:
      base.n = as_positive_int(value, "n");
      break;
    case SweepAxis::Alpha:
      base.alpha = value;
      break;
    case SweepAxis::Lambda:
      base.lambda_mode = LambdaMode::Explicit;
      base.lambda = value;
      break;
  }
  return base;
}

namespace {

// Runs all (cell, trial) slots over `jobs` threads; slot results land in
// preassigned positions so scheduling never changes the output.
std::vector<TrialRecord> run_cells(const std::vector<TrialConfig>& cells,
                                   int trials, int jobs) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (const TrialConfig& c : cells) validate_config(c);
  jobs = std::max(1, jobs);

  const std::size_t total = cells.size() * static_cast<std::size_t>(trials);
  std::vector<TrialRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= total || failed.load()) return;
      const int cell = static_cast<int>(slot / static_cast<std::size_t>(trials));
      const int trial = static_cast<int>(slot % static_cast<std::size_t>(trials));
      try {
        records[slot] =
            run_trial_in_cell(cells[static_cast<std::size_t>(cell)], trial, cell);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return records;
}

SweepPoint aggregate_cell(const std::vector<TrialRecord>& records,
                          std::size_t begin, int trials, double value) {
  SweepPoint point;
  point.value = value;
  int successes = 0;
  int optimal = 0;
  double err_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TrialRecord& r = records[begin + static_cast<std::size_t>(t)];
    if (r.success) ++successes;
    if (r.status == SolveStatus::Optimal) {
      ++optimal;
      err_sum += r.rel_error;
    }
  }
  point.success_rate = static_cast<double>(successes) / trials;
  point.mean_rel_error = optimal > 0
                             ? err_sum / optimal
                             : std::numeric_limits<double>::quiet_NaN();
  return point;
}

}  // namespace

SweepResult run_sweep(const TrialConfig& base, SweepAxis axis,
                      const std::vector<double>& grid, int trials, int jobs) {
  if (grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
  SweepResult result;
  result.axis = axis;
  result.grid = grid;
  result.trials_per_cell = trials;

  std::vector<TrialConfig> cells;
  cells.reserve(grid.size());
  for (double v : grid) cells.push_back(apply_axis(base, axis, v));

  result.records = run_cells(cells, trials, jobs);
  result.points.reserve(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    result.points.push_back(aggregate_cell(
        result.records, c * static_cast<std::size_t>(trials), trials, grid[c]));
  }
  return result;
}

PhaseDiagram phase_diagram(const TrialConfig& base, SweepAxis axis1,
                           const std::vector<double>& grid1, SweepAxis axis2,
                           const std::vector<double>& grid2, int trials,
                           int jobs) {
  if (axis1 == axis2) throw std::invalid_argument("phase_diagram: axes must differ");
  if (grid1.empty() || grid2.empty()) {
    throw std::invalid_argument("phase_diagram: empty grid");
  }
  PhaseDiagram diagram;
  diagram.axis1 = axis1;
  diagram.axis2 = axis2;
  diagram.grid1 = grid1;
  diagram.grid2 = grid2;
  diagram.trials_per_cell = trials;

  std::vector<TrialConfig> cells;
  cells.reserve(grid1.size() * grid2.size());
  for (double v1 : grid1) {
    for (double v2 : grid2) {
      cells.push_back(apply_axis(apply_axis(base, axis1, v1), axis2, v2));
    }
  }

  diagram.records = run_cells(cells, trials, jobs);
  diagram.success_rate.assign(grid1.size(),
                              std::vector<double>(grid2.size(), 0.0));
  for (std::size_t i = 0; i < grid1.size(); ++i) {
    for (std::size_t j = 0; j < grid2.size(); ++j) {
      const std::size_t cell = i * grid2.size() + j;
      diagram.success_rate[i][j] =
          aggregate_cell(diagram.records, cell * static_cast<std::size_t>(trials),
                         trials, 0.0)
              .success_rate;
    }
  }
  return diagram;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void write_record_row(std::ostream& out, const TrialRecord& r,
                      const std::string& a1, const std::string& a2,
                      bool include_timing) {
  out << a1 << ',' << a2 << ',' << r.trial_index << ',' << r.trial_seed << ','
      << to_string(r.status) << ','
      << (r.status == SolveStatus::Optimal ? format_double(r.rel_error) : "")
      << ',' << (r.success ? 1 : 0) << ','
      << (r.status == SolveStatus::Optimal
              ? format_double(r.objective_gap_vs_truth)
              : "")
      << ',' << (include_timing ? format_double(r.wall_time) : "0") << '\n';
}

constexpr const char* kRecordsHeader =
    "axis1,axis2,trial,seed,status,rel_error,success,objective_gap,wall_time";

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records,
                       const std::vector<std::string>& axis1_per_record,
                       const std::vector<std::string>& axis2_per_record,
                       bool include_timing) {
  out << kRecordsHeader << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string a1 = i < axis1_per_record.size() ? axis1_per_record[i] : "";
    const std::string a2 = i < axis2_per_record.size() ? axis2_per_record[i] : "";
    write_record_row(out, records[i], a1, a2, include_timing);
  }
}

void write_sweep_records_csv(std::ostream& out, const SweepResult& sweep,
                             bool include_timing) {
  out << kRecordsHeader << '\n';
  for (std::size_t c = 0; c < sweep.grid.size(); ++c) {
    for (int t = 0; t < sweep.trials_per_cell; ++t) {
      const std::size_t idx =
          c * static_cast<std::size_t>(sweep.trials_per_cell) +
          static_cast<std::size_t>(t);
      write_record_row(out, sweep.records[idx], format_double(sweep.grid[c]), "",
                       include_timing);
    }
  }
}

void write_sweep_summary_csv(std::ostream& out, const SweepResult& sweep) {
  out << "axis1,axis2,trials,success_rate,mean_rel_error\n";
  for (const SweepPoint& p : sweep.points) {
    out << format_double(p.value) << ",," << sweep.trials_per_cell << ','
        << format_double(p.success_rate) << ','
        << format_double(p.mean_rel_error) << '\n';
  }
}

void write_diagram_records_csv(std::ostream& out, const PhaseDiagram& diagram,
                               bool include_timing) {
  out << kRecordsHeader << '\n';
  const std::size_t n2 = diagram.grid2.size();
  for (std::size_t i = 0; i < diagram.grid1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      for (int t = 0; t < diagram.trials_per_cell; ++t) {
        const std::size_t idx =
            (i * n2 + j) * static_cast<std::size_t>(diagram.trials_per_cell) +
            static_cast<std::size_t>(t);
        write_record_row(out, diagram.records[idx],
                         format_double(diagram.grid1[i]),
                         format_double(diagram.grid2[j]), include_timing);
      }
    }
  }
}

void write_diagram_summary_csv(std::ostream& out, const PhaseDiagram& diagram) {
  out << "axis1,axis2,trials,success_rate,mean_rel_error\n";
  const std::size_t n2 = diagram.grid2.size();
  for (std::size_t i = 0; i < diagram.grid1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t cell = i * n2 + j;
      const SweepPoint p = [&] {
        SweepPoint q;
        int successes = 0, optimal = 0;
        double err = 0.0;
        for (int t = 0; t < diagram.trials_per_cell; ++t) {
          const TrialRecord& r =
              diagram.records[cell * static_cast<std::size_t>(
                                         diagram.trials_per_cell) +
                              static_cast<std::size_t>(t)];
          if (r.success) ++successes;
          if (r.status == SolveStatus::Optimal) {
            ++optimal;
            err += r.rel_error;
          }
        }
        q.success_rate =
            static_cast<double>(successes) / diagram.trials_per_cell;
        q.mean_rel_error = optimal > 0
                               ? err / optimal
                               : std::numeric_limits<double>::quiet_NaN();
        return q;
      }();
      out << format_double(diagram.grid1[i]) << ','
          << format_double(diagram.grid2[j]) << ',' << diagram.trials_per_cell
          << ',' << format_double(p.success_rate) << ','
          << format_double(p.mean_rel_error) << '\n';
    }
  }
}

void write_diagram_json(std::ostream& out, const PhaseDiagram& diagram) {
  out << "{\n";
  out << "  \"axis1\": {\"name\": \"" << axis_name(diagram.axis1)
      << "\", \"grid\": [";
  for (std::size_t i = 0; i < diagram.grid1.size(); ++i) {
    out << (i ? ", " : "") << format_double(diagram.grid1[i]);
  }
  out << "]},\n";
  out << "  \"axis2\": {\"name\": \"" << axis_name(diagram.axis2)
      << "\", \"grid\": [";
  for (std::size_t j = 0; j < diagram.grid2.size(); ++j) {
    out << (j ? ", " : "") << format_double(diagram.grid2[j]);
  }
  out << "]},\n";
  out << "  \"trials_per_cell\": " << diagram.trials_per_cell << ",\n";
  out << "  \"success_rate\": [";
  for (std::size_t i = 0; i < diagram.success_rate.size(); ++i) {
    out << (i ? ", " : "") << "[";
    for (std::size_t j = 0; j < diagram.success_rate[i].size(); ++j) {
      out << (j ? ", " : "") << format_double(diagram.success_rate[i][j]);
    }
    out << "]";
  }
  out << "]\n}\n";
}

}  // namespace spm
