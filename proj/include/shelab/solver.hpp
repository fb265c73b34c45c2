#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shelab/coefficients.hpp"
#include "shelab/fields.hpp"
#include "shelab/initial_condition.hpp"
#include "shelab/kernel.hpp"
#include "shelab/noise.hpp"

namespace shelab {

/// How the noise term of one step is damped per mode.
///   exact_variance: sqrt((1 - e^{-2 lambda dt}) / (2 lambda dt)), matching the isometry at grid times
///   left_point:     e^{-lambda dt}
enum class NoiseScheme { exact_variance, left_point };

const char* noise_scheme_name(NoiseScheme s);
NoiseScheme parse_noise_scheme(const std::string& name);

struct Truncation {
  double N = 20.0;
  double alpha = 0.5;

  bool operator==(const Truncation&) const = default;
};

struct SolverConfig {
  int grid_points = 128;  ///< n_x
  int steps = 256;        ///< n_t
  double horizon = 0.5;   ///< T
  bool allow_long_horizon = false;

  InitialCondition initial = InitialCondition::zero();
  /// u0 + perturbation_scale * perturbation
  InitialCondition perturbation = InitialCondition::zero();
  double perturbation_scale = 0.0;

  DriftSpec drift = DriftSpec::zero();
  std::optional<Truncation> truncation;
  SigmaSpec sigma = SigmaSpec::constant(1.0);

  KernelOptions kernel;
  NoiseScheme noise_scheme = NoiseScheme::exact_variance;
  /// Multiplies the noise variance. Only meant for fault-injection runs.
  double noise_variance_scale = 1.0;
  std::uint64_t master_seed = 0;

  double dt() const { return horizon / steps; }
  double dx() const { return 1.0 / grid_points; }
  /// Throws ConfigError.
  void validate() const;
  /// Canonical text of everything that determines a path except the path index.
  std::string canonical() const;
  /// Hex FNV-1a hash of canonical().
  std::string digest() const;
};

/// Output of a run split along the mild form: total = semigroup + drift + noise.
struct Decomposition {
  Trajectory total;
  Trajectory semigroup;
  Trajectory drift;
  Trajectory noise;
};

struct StoppingRecord {
  double N = 0.0;
  double alpha = 0.5;
  double stop_time = std::numeric_limits<double>::infinity();
  int stop_row = -1;

  bool stopped() const { return stop_row >= 0; }
};

struct PatchedRun {
  Trajectory trajectory;
  std::vector<StoppingRecord> records;
  /// Index into the cutoff sequence of the run that reached the horizon.
  std::optional<int> accepted;
};

/// Prepared solver: kernel table, mode factors and initial coefficients for one config.
/// Immutable after construction; paths can run concurrently.
class Solver {
 public:
  explicit Solver(SolverConfig config);

  const SolverConfig& config() const { return config_; }
  const KernelTable& kernel() const { return kernel_; }
  int cells() const { return config_.grid_points - 1; }
  const SineCoefficients& initial_coefficients() const { return initial_coeffs_; }
  const std::vector<double>& initial_grid() const { return initial_grid_; }
  /// e^{-lambda_n dt}
  std::span<const double> decay() const { return decay_; }
  /// Noise damping per mode for the configured scheme.
  std::span<const double> noise_factor() const { return noise_factor_; }

  /// b or b_N evaluated at time t.
  double drift(double t, double z) const;
  NoiseStream noise(std::uint32_t path_index) const;
  /// Blank trajectory carrying this config's metadata and initial grid.
  Trajectory blank(std::uint32_t path_index) const;

  /// One exponential-Euler step from grid state u(t) with noise increment w. A non-finite result
  /// is returned as is; callers decide how to record it.
  std::vector<double> step(std::span<const double> state, double t, std::span<const double> increment) const;

  Trajectory simulate(std::uint32_t path_index) const;
  Decomposition simulate_decomposed(std::uint32_t path_index) const;

  /// sum_{s<t} G_{t-s} F(s) dt. F(s) is taken at grid times s = 0, dt, ..., with F.initial at s = 0.
  Trajectory lebesgue_convolve(const Trajectory& F) const;
  /// sum_{s<t} G_{t-s}(X(s) w_s) with the noise of `stream`.
  Trajectory walsh_convolve(const Trajectory& X, const NoiseStream& stream) const;

  /// U_0 = G_t u0, U_{n+1} = U_0 + L[b(U_n)] + W[sigma(U_n)], one noise realisation throughout.
  std::vector<Trajectory> picard(int n_iter, std::uint32_t path_index) const;

 private:
  SolverConfig config_;
  KernelTable kernel_;
  std::optional<TruncatedDrift> truncated_;
  SineCoefficients initial_coeffs_;
  std::vector<double> initial_grid_;
  std::vector<double> decay_;
  std::vector<double> noise_factor_;
};

std::vector<double> step(std::span<const double> state, double t, const SolverConfig& cfg,
                         std::span<const double> increment);
Trajectory simulate(const SolverConfig& cfg, std::uint32_t path_index);
Trajectory lebesgue_convolve(const Trajectory& F, const KernelTable& table);
Trajectory walsh_convolve(const Trajectory& X, const KernelTable& table, const NoiseStream& stream,
                          NoiseScheme scheme = NoiseScheme::exact_variance);
std::vector<Trajectory> picard_run(const SolverConfig& cfg, int n_iter, std::uint32_t path_index);

/// First grid time with max_x |u| > N / t^alpha; non-finite rows always trip.
StoppingRecord detect_stop(const Trajectory& traj, double N, double alpha);

/// Runs u_N for the cutoffs in order until one never trips before the horizon. The config must
/// carry an untruncated drift; `alpha` is the cutoff exponent.
PatchedRun patched_simulate(const SolverConfig& cfg, std::span<const double> N_sequence, double alpha,
                            std::uint32_t path_index);

/// Mode damping factors for a scheme.
std::vector<double> noise_damping(const KernelTable& table, double dt, NoiseScheme scheme);

}  // namespace shelab
