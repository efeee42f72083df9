#include "spm/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spm/rng.hpp"

namespace spm {

namespace {

Eigen::VectorXd vector_from_json(const nlohmann::json& arr, int expected,
                                 const char* what) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != expected) {
    throw std::runtime_error(std::string("instance: field '") + what +
                             "' must be an array of length " +
                             std::to_string(expected));
  }
  Eigen::VectorXd v(expected);
  for (int i = 0; i < expected; ++i) {
    if (!arr[static_cast<std::size_t>(i)].is_number()) {
      throw std::runtime_error(std::string("instance: field '") + what +
                               "' must contain numbers");
    }
    v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

std::string dist_to_string(const SignalDistribution& dist) {
  switch (dist.kind) {
    case SignalDistribution::Kind::GaussianNonzeros: return "gaussian-nonzeros";
    case SignalDistribution::Kind::UnitMagnitudeSigns: return "unit-magnitude-signs";
    case SignalDistribution::Kind::ProvidedValues: return "provided-values";
  }
  return "gaussian-nonzeros";
}

SignalDistribution dist_from_string(const std::string& name,
                                    std::vector<double> provided) {
  if (name == "gaussian-nonzeros") return SignalDistribution::gaussian_nonzeros();
  if (name == "unit-magnitude-signs") {
    return SignalDistribution::unit_magnitude_signs();
  }
  if (name == "provided-values") {
    return SignalDistribution::provided_values(std::move(provided));
  }
  throw std::runtime_error("unknown signal distribution: " + name);
}

void materialize(ProblemInstance& inst) {
  if (inst.n < 1 || inst.k < 1 || inst.k > inst.n || inst.m < 1) {
    throw std::runtime_error("instance: need 1 <= k <= n and m >= 1");
  }
  const std::uint64_t trial_seed = derive_seed(inst.seed, 0, 0);

  SparseSignal x0;
  if (inst.signal) {
    x0.n = inst.n;
    x0.values = *inst.signal;
    for (int i = 0; i < inst.n; ++i) {
      if (x0.values[i] != 0.0) x0.support.push_back(i);
    }
    x0.k = static_cast<int>(x0.support.size());
    if (x0.k != inst.k) {
      throw std::runtime_error(
          "instance: signal support size does not match k");
    }
  } else {
    x0 = generate_sparse_signal(inst.n, inst.k, inst.dist,
                                derive_seed(trial_seed, 0, 1));
    inst.signal = x0.values;
  }

  if (!inst.rows) {
    const MeasurementSet meas =
        generate_measurements(x0, inst.m, derive_seed(trial_seed, 0, 2));
    inst.rows = meas.rows;
    if (!inst.magnitudes) inst.magnitudes = meas.magnitudes;
  }
  if (!inst.magnitudes) {
    const MeasurementSet meas = measurements_from_rows(*inst.rows, x0.values);
    inst.magnitudes = meas.magnitudes;
  }
  if ((inst.magnitudes->array() < 0.0).any()) {
    throw std::runtime_error("instance: magnitudes must be nonnegative");
  }

  if (!inst.phi) {
    inst.phi = make_anchor(x0, inst.alpha, derive_seed(trial_seed, 0, 3)).phi;
  }
}

ProblemInstance build_instance(int n, int k, int m, double alpha,
                               LambdaMode lambda_mode, double lambda,
                               const SignalDistribution& dist,
                               std::uint64_t seed) {
  ProblemInstance inst;
  inst.n = n;
  inst.k = k;
  inst.m = m;
  inst.alpha = alpha;
  inst.seed = seed;
  inst.dist = dist;

  TrialConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.m = m;
  cfg.alpha = alpha;
  cfg.lambda_mode = lambda_mode;
  cfg.lambda = lambda;
  inst.lambda = resolve_lambda(cfg);

  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::runtime_error("instance: alpha must lie in (0, 1]");
  }
  materialize(inst);
  return inst;
}

nlohmann::json instance_to_json(const ProblemInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n;
  j["k"] = inst.k;
  j["m"] = inst.m;
  j["alpha"] = inst.alpha;
  j["lambda"] = inst.lambda;
  j["seed"] = inst.seed;
  j["dist"] = dist_to_string(inst.dist);
  if (inst.dist.kind == SignalDistribution::Kind::ProvidedValues) {
    j["values"] = inst.dist.provided;
  }
  if (inst.signal) j["signal"] = vector_to_json(*inst.signal);
  if (inst.rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < inst.rows->rows(); ++i) {
      for (int c = 0; c < inst.rows->cols(); ++c) arr.push_back((*inst.rows)(i, c));
    }
    j["rows"] = std::move(arr);
  }
  if (inst.magnitudes) j["magnitudes"] = vector_to_json(*inst.magnitudes);
  if (inst.phi) j["phi"] = vector_to_json(*inst.phi);
  return j;
}

ProblemInstance instance_from_json(const nlohmann::json& j) {
  ProblemInstance inst;
  try {
    inst.n = j.at("n").get<int>();
    inst.k = j.at("k").get<int>();
    inst.m = j.at("m").get<int>();
    inst.alpha = j.at("alpha").get<double>();
    inst.lambda = j.at("lambda").get<double>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    std::vector<double> provided;
    if (j.contains("values")) provided = j["values"].get<std::vector<double>>();
    inst.dist = dist_from_string(j.value("dist", "gaussian-nonzeros"),
                                 std::move(provided));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
  if (inst.n < 1 || inst.k < 1 || inst.k > inst.n || inst.m < 1) {
    throw std::runtime_error("instance: need 1 <= k <= n and m >= 1");
  }
  if (!(inst.lambda >= 0.0)) {
    throw std::runtime_error("instance: lambda must be >= 0");
  }

  if (j.contains("signal")) {
    inst.signal = vector_from_json(j["signal"], inst.n, "signal");
  }
  if (j.contains("rows")) {
    const nlohmann::json& arr = j["rows"];
    if (!arr.is_array() ||
        static_cast<long long>(arr.size()) !=
            static_cast<long long>(inst.m) * inst.n) {
      throw std::runtime_error("instance: field 'rows' must hold m*n numbers");
    }
    Eigen::MatrixXd rows(inst.m, inst.n);
    for (int i = 0; i < inst.m; ++i) {
      for (int c = 0; c < inst.n; ++c) {
        const nlohmann::json& cell =
            arr[static_cast<std::size_t>(i) * static_cast<std::size_t>(inst.n) +
                static_cast<std::size_t>(c)];
        if (!cell.is_number()) {
          throw std::runtime_error("instance: field 'rows' must contain numbers");
        }
        rows(i, c) = cell.get<double>();
      }
    }
    inst.rows = std::move(rows);
  }
  if (j.contains("magnitudes")) {
    inst.magnitudes = vector_from_json(j["magnitudes"], inst.m, "magnitudes");
  }
  if (j.contains("phi")) {
    inst.phi = vector_from_json(j["phi"], inst.n, "phi");
  }
  return inst;
}

SparsePhaseMaxSpec spec_from_instance(const ProblemInstance& inst) {
  ProblemInstance filled = inst;
  materialize(filled);
  SparsePhaseMaxSpec spec;
  spec.phi = *filled.phi;
  spec.lambda = filled.lambda;
  spec.meas.m = filled.m;
  spec.meas.rows = *filled.rows;
  spec.meas.magnitudes = *filled.magnitudes;
  return spec;
}

nlohmann::json solution_to_json(const LpSolution& sol, int n) {
  nlohmann::json j;
  j["status"] = to_string(sol.status);
  j["gap"] = sol.gap;
  j["iterations"] = sol.iterations;
  if (sol.status == SolveStatus::Optimal) {
    j["x_hat"] = vector_to_json(sol.x_hat.head(n));
    j["objective"] = sol.objective;
  } else {
    j["x_hat"] = nullptr;
    j["objective"] = nullptr;
  }
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spm
