// Command-line front end: gen / solve / check / trial / sweep / diagram.
//
// Exit codes: 0 success (or optimal solve), 2 usage or input validation
// error, 3 unbounded program, 4 numerical failure. All randomness flows from
// --seed; outputs are byte-reproducible for identical flags within one build
// (pass --timing to record wall times, which breaks that on purpose).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spm/harness.hpp"
#include "spm/instance_io.hpp"
#include "spm/oracle.hpp"
#include "spm/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnbounded = 3;
constexpr int kExitNumerical = 4;

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::runtime_error("bad grid value: " + item);
    grid.push_back(v);
  }
  if (grid.empty()) throw std::runtime_error("empty grid");
  return grid;
}

int jobs_or_default(std::optional<int> jobs) {
  if (jobs) return std::max(1, *jobs);
  if (const char* env = std::getenv("SPM_DEFAULT_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      throw std::runtime_error("SPM_DEFAULT_JOBS is not an integer");
    }
  }
  return 1;
}

struct CommonFlags {
  int n = 0, k = 0, m = 0;
  double alpha = 1.0;
  std::optional<double> lambda;
  std::string lambda_mode = "paper-midpoint";
  std::string dist = "gaussian-nonzeros";
  std::string values_csv;
  std::uint64_t seed = 0;
  double tol = 1e-5;
};

spm::SignalDistribution make_dist(const CommonFlags& f) {
  std::vector<double> provided;
  if (!f.values_csv.empty()) provided = parse_grid(f.values_csv);
  return spm::dist_from_string(f.dist, std::move(provided));
}

spm::LambdaMode make_lambda_mode(const CommonFlags& f) {
  if (f.lambda) return spm::LambdaMode::Explicit;
  if (f.lambda_mode == "paper-midpoint" || f.lambda_mode == "midpoint") {
    return spm::LambdaMode::PaperMidpoint;
  }
  throw std::runtime_error("unknown lambda mode: " + f.lambda_mode);
}

spm::TrialConfig make_trial_config(const CommonFlags& f) {
  spm::TrialConfig cfg;
  cfg.n = f.n;
  cfg.k = f.k;
  cfg.m = f.m;
  cfg.alpha = f.alpha;
  cfg.lambda_mode = make_lambda_mode(f);
  cfg.lambda = f.lambda.value_or(0.0);
  cfg.dist = make_dist(f);
  cfg.success_tol = f.tol;
  cfg.seed = f.seed;
  return cfg;
}

void add_model_flags(CLI::App* cmd, CommonFlags& f, bool need_m) {
  cmd->add_option("--n", f.n, "signal dimension")->required();
  cmd->add_option("--k", f.k, "sparsity")->required();
  auto* m_opt = cmd->add_option("--m", f.m, "measurement count");
  if (need_m) m_opt->required();
  cmd->add_option("--alpha", f.alpha, "anchor correlation in (0,1]")->required();
  cmd->add_option("--lambda", f.lambda, "explicit l1 weight");
  cmd->add_option("--lambda-mode", f.lambda_mode,
                  "lambda rule when --lambda absent (paper-midpoint)");
  cmd->add_option("--dist", f.dist,
                  "signal distribution: gaussian-nonzeros | "
                  "unit-magnitude-signs | provided-values");
  cmd->add_option("--values", f.values_csv,
                  "comma list of k nonzeros for provided-values");
  cmd->add_option("--seed", f.seed, "master seed")->required();
  cmd->add_option("--tol", f.tol, "relative recovery tolerance");
}

int cmd_gen(const CommonFlags& f, const std::string& out_path) {
  const spm::ProblemInstance inst =
      spm::build_instance(f.n, f.k, f.m, f.alpha, make_lambda_mode(f),
                          f.lambda.value_or(0.0), make_dist(f), f.seed);
  const std::string text = spm::instance_to_json(inst).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    spm::write_text_file(out_path, text);
  }
  std::cerr << "gen: n=" << inst.n << " k=" << inst.k << " m=" << inst.m
            << " alpha=" << inst.alpha << " lambda=" << inst.lambda << "\n";
  return kExitOk;
}

int cmd_solve(const std::string& problem_path, const std::string& out_path,
              double tol_gap, bool use_oracle) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(spm::read_text_file(problem_path));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("cannot parse problem file: ") + e.what());
  }
  const spm::ProblemInstance inst = spm::instance_from_json(parsed);
  const spm::SparsePhaseMaxSpec spec = spm::spec_from_instance(inst);
  const spm::LpProblem problem = spm::formulate(spec);

  spm::SolverConfig cfg;
  cfg.tol_gap = tol_gap;
  cfg.tol_feas = tol_gap;
  const spm::LpSolution sol =
      use_oracle ? spm::solve_exhaustive(problem) : spm::solve(problem, cfg);

  const std::string text = spm::solution_to_json(sol, inst.n).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    spm::write_text_file(out_path, text);
  }
  switch (sol.status) {
    case spm::SolveStatus::Optimal: return kExitOk;
    case spm::SolveStatus::Unbounded: return kExitUnbounded;
    case spm::SolveStatus::NumericalFailure: return kExitNumerical;
  }
  return kExitNumerical;
}

int cmd_check(const CommonFlags& f, double c1, double embedding_c,
              const std::string& out_path) {
  const auto [lo, hi] = spm::lambda_range(f.alpha, f.k);
  spm::TrialConfig cfg = make_trial_config(f);
  const double lambda = spm::resolve_lambda(cfg);

  nlohmann::json j;
  j["n"] = f.n;
  j["k"] = f.k;
  j["m"] = f.m;
  j["alpha"] = f.alpha;
  j["lambda"] = lambda;
  j["lambda_lo"] = lo;
  j["lambda_hi"] = hi;
  j["lambda_in_range"] = lambda > lo && lambda < hi;
  j["sparsity_bound_ok"] = spm::sparsity_bound_ok(f.k, f.n, f.alpha);
  j["m_threshold"] = spm::sample_complexity(f.k, f.n, f.alpha, c1);
  j["m_sufficient"] = static_cast<double>(f.m) > j["m_threshold"].get<double>();
  j["delta_predicted"] = spm::embedding_delta(static_cast<double>(f.k), f.m,
                                              f.n, embedding_c);

  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    spm::write_text_file(out_path, text);
  }
  return kExitOk;
}

int strict_exit(const std::vector<spm::TrialRecord>& records, bool strict) {
  if (!strict) return kExitOk;
  for (const spm::TrialRecord& r : records) {
    if (r.status == spm::SolveStatus::NumericalFailure) return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sparse phase retrieval toolkit: anchored l1 linear programming over "
      "magnitude-only Gaussian measurements"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string out_path;
  std::string problem_path;
  std::string axis = "m", axis2 = "k";
  std::string grid_csv, grid2_csv;
  int trials = 10;
  int trial_index = 0;
  std::optional<int> jobs;
  bool strict = false;
  bool timing = false;
  bool use_oracle = false;
  double tol_gap = 1e-8;
  double c1 = 1.0, embedding_c = 1.0;

  CLI::App* gen = app.add_subcommand("gen", "generate a problem instance file");
  add_model_flags(gen, f, true);
  gen->add_option("--out", out_path, "output path (stdout when absent)");

  CLI::App* solve = app.add_subcommand("solve", "solve an instance file");
  solve->add_option("--problem", problem_path, "instance JSON path")->required();
  solve->add_option("--out", out_path, "solution path (stdout when absent)");
  solve->add_option("--tol", tol_gap, "duality gap / residual tolerance");
  solve->add_flag("--oracle", use_oracle,
                  "use the exhaustive enumeration solver (tiny instances)");

  CLI::App* check = app.add_subcommand("check", "evaluate recovery conditions");
  add_model_flags(check, f, true);
  check->add_option("--c1", c1, "sample-complexity constant stand-in");
  check->add_option("--embedding-constant", embedding_c,
                    "embedding constant stand-in");
  check->add_option("--out", out_path, "output path (stdout when absent)");

  CLI::App* trial = app.add_subcommand("trial", "run one recovery trial");
  add_model_flags(trial, f, true);
  trial->add_option("--trial-index", trial_index, "trial index (default 0)");
  trial->add_option("--out", out_path, "records CSV path (stdout when absent)");
  trial->add_flag("--timing", timing, "record wall times (non-reproducible)");
  trial->add_flag("--strict", strict, "exit 4 on numerical failure");

  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter");
  add_model_flags(sweep, f, true);
  sweep->add_option("--axis", axis, "swept axis: m|k|alpha|lambda|n")->required();
  sweep->add_option("--grid", grid_csv, "comma list of axis values")->required();
  sweep->add_option("--trials", trials, "trials per grid value");
  sweep->add_option("--jobs", jobs, "worker threads (SPM_DEFAULT_JOBS)");
  sweep->add_option("--out", out_path, "output prefix")->required();
  sweep->add_flag("--timing", timing, "record wall times (non-reproducible)");
  sweep->add_flag("--strict", strict, "exit 4 on any numerical failure");

  CLI::App* diagram = app.add_subcommand("diagram", "two-axis phase diagram");
  add_model_flags(diagram, f, true);
  diagram->add_option("--axis1", axis, "first axis")->required();
  diagram->add_option("--grid1", grid_csv, "first grid")->required();
  diagram->add_option("--axis2", axis2, "second axis")->required();
  diagram->add_option("--grid2", grid2_csv, "second grid")->required();
  diagram->add_option("--trials", trials, "trials per cell");
  diagram->add_option("--jobs", jobs, "worker threads (SPM_DEFAULT_JOBS)");
  diagram->add_option("--out", out_path, "output prefix")->required();
  diagram->add_flag("--timing", timing, "record wall times (non-reproducible)");
  diagram->add_flag("--strict", strict, "exit 4 on any numerical failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(f, out_path);
    if (solve->parsed()) return cmd_solve(problem_path, out_path, tol_gap, use_oracle);
    if (check->parsed()) return cmd_check(f, c1, embedding_c, out_path);

    if (trial->parsed()) {
      const spm::TrialRecord rec = spm::run_trial(make_trial_config(f), trial_index);
      std::ostringstream csv;
      spm::write_records_csv(csv, {rec}, {}, {}, timing);
      if (out_path.empty()) {
        std::cout << csv.str();
      } else {
        spm::write_text_file(out_path, csv.str());
      }
      return strict_exit({rec}, strict);
    }

    if (sweep->parsed()) {
      const spm::SweepResult result =
          spm::run_sweep(make_trial_config(f), spm::parse_axis(axis),
                         parse_grid(grid_csv), trials, jobs_or_default(jobs));
      std::ostringstream records, summary;
      spm::write_sweep_records_csv(records, result, timing);
      spm::write_sweep_summary_csv(summary, result);
      spm::write_text_file(out_path + ".csv", records.str());
      spm::write_text_file(out_path + "_summary.csv", summary.str());
      return strict_exit(result.records, strict);
    }

    if (diagram->parsed()) {
      const spm::PhaseDiagram result = spm::phase_diagram(
          make_trial_config(f), spm::parse_axis(axis), parse_grid(grid_csv),
          spm::parse_axis(axis2), parse_grid(grid2_csv), trials,
          jobs_or_default(jobs));
      std::ostringstream records, summary, json;
      spm::write_diagram_records_csv(records, result, timing);
      spm::write_diagram_summary_csv(summary, result);
      spm::write_diagram_json(json, result);
      spm::write_text_file(out_path + ".csv", records.str());
      spm::write_text_file(out_path + "_summary.csv", summary.str());
      spm::write_text_file(out_path + ".json", json.str());
      return strict_exit(result.records, strict);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
