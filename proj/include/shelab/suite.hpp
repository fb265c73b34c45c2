#pragma once

#include <string>
#include <vector>

#include "shelab/verifier.hpp"

namespace shelab {

/// The canonical Monte Carlo experiments, each with its own model setup.
enum class StochasticCheck {
  isometry,
  picard,
  lebesgue,
  walsh,
  comparison,
  stability,
  l2_continuity,
  decay,
  chaining,
  moment,
  uniqueness
};

const char* stochastic_check_name(StochasticCheck c);
StochasticCheck parse_stochastic_check(const std::string& name);
std::vector<StochasticCheck> all_stochastic_checks();

/// Grid, seed and effort shared by every canonical experiment. The model (drift, sigma, u0) is
/// fixed per experiment.
struct SuiteSettings {
  int grid_points = 128;
  int steps = 256;
  double horizon = 0.5;
  std::uint64_t seed = 0;
  MonteCarloOptions mc;
  int isometry_paths = 10000;
  int comparison_paths = 100;
  /// Constants of the envelope weight beta = 4 C K_b and the decay window t0 = 1/(32 A (theta2 + 1)).
  double C = 1.0;
  double A = 2.0;
  /// Fault injection, applied to every experiment.
  KernelOptions kernel;
  double noise_variance_scale = 1.0;
};

/// Base solver config of the canonical experiments: truncated L log L drift, sigma = 1 + sin(u)/2.
SolverConfig suite_base_config(const SuiteSettings& s);

/// Runs one canonical experiment; some produce one report per parameter value.
std::vector<CheckReport> run_stochastic_check(StochasticCheck check, const SuiteSettings& s);

}  // namespace shelab
