#pragma once

#include <cstdint>

#include "spm/formulation.hpp"
#include "spm/rng.hpp"

namespace spm::testing {

struct TinyInstance {
  SparseSignal truth;
  SparsePhaseMaxSpec spec;
};

// Random desk-corner instance for oracle cross-checks: n <= 3, m <= 4,
// lambda in [0, 1.5] (pinned to 0 every seventh draw so the flat-epigraph
// face gets exercised).
inline TinyInstance random_tiny_instance(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 41, 0));
  const int n = 1 + static_cast<int>(rng.below(3));
  const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const int m = 1 + static_cast<int>(rng.below(4));
  const double alpha = n == 1 ? 1.0 : 0.3 + 0.7 * rng.uniform();
  double lambda = 1.5 * rng.uniform();
  if (seed % 7 == 0) lambda = 0.0;

  TinyInstance inst;
  inst.truth = generate_sparse_signal(
      n, k, SignalDistribution::gaussian_nonzeros(), derive_seed(seed, 42, 1));
  const MeasurementSet meas =
      generate_measurements(inst.truth, m, derive_seed(seed, 42, 2));
  const AnchorVector anchor =
      make_anchor(inst.truth, alpha, derive_seed(seed, 42, 3));
  inst.spec = {anchor.phi, lambda, meas};
  return inst;
}

}  // namespace spm::testing
