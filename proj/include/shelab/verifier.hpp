#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shelab/coefficients.hpp"
#include "shelab/fields.hpp"
#include "shelab/kernel.hpp"
#include "shelab/quadrature.hpp"
#include "shelab/solver.hpp"

namespace shelab {

/// Columns and rows of a per-check detail file.
struct DetailTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CheckReport {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  std::string name;
  double statistic = kNaN;  ///< headline value at the finer level
  double bound = kNaN;      ///< threshold it is compared with; NaN when only finiteness is asked
  double coarse = kNaN;     ///< statistic at the coarser refinement level
  double fine = kNaN;       ///< statistic at the finer refinement level
  double stderr_ = kNaN;
  bool pass = false;
  bool inconclusive = false;
  double runtime_seconds = 0.0;
  std::string note;
  std::vector<std::pair<std::string, double>> diagnostics;
  DetailTable detail;

  /// |fine - coarse| / |fine|; 0 when both vanish.
  double refinement_change() const;
  std::optional<double> diagnostic(const std::string& key) const;
};

// ---------------------------------------------------------------------------------------------
// Deterministic kernel inequalities

enum class LemmaId {
  kernel_mass_and_peak_bound,
  spatial_l2_increment,
  spatial_l1_weighted_increment,
  weighted_time_integral,
  weighted_time_integral_log,
  temporal_l1_log_bound,
  temporal_l1_weighted_increment,
};

const char* lemma_name(LemmaId id);
LemmaId parse_lemma(const std::string& name);
std::vector<LemmaId> all_lemmas();

struct LemmaCheckSpec {
  LemmaId id = LemmaId::kernel_mass_and_peak_bound;
  std::vector<double> t_values;
  std::vector<double> x_values;
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> alpha_values;   ///< also theta for the temporal increment
  std::vector<double> delta_values;
  std::vector<double> chi_values;
  std::vector<double> beta_values;
  std::vector<double> eps_values;
  /// eta = delta + f (1 - delta) for each fraction f in (0, 1)
  std::vector<double> eta_fractions;
  int random_samples = 1000;
  std::uint64_t seed = 20240611;
  int level = 5;      ///< coarse level; the fine level is level + 1
  int max_level = 8;
  double tolerance = 1e-9;    ///< slack of absolute bounds
  double stability = 0.10;    ///< allowed relative change of the best constant between levels
  double convergence = 1e-4;  ///< pointwise change (relative to the sup) that stops refinement
  int workers = 0;
  /// Also sweep the corner outside the stated range (reported as a diagnostic only).
  bool range_extension = true;

  static LemmaCheckSpec defaults(LemmaId id);
  /// Throws ConfigError when a grid leaves the lemma's stated range.
  void validate() const;
};

/// Gauss-Legendre order used for the y-integrals at a level.
int inner_order(int level);

/// int_0^1 |G_r(x,y) - G_r(z,y)| dy
double spatial_l1_difference(const KernelTable& table, double r, double x, double z, const GaussLegendre& rule);
/// int_0^1 |G_{r+eps}(x,y) - G_r(x,y)| dy
double temporal_l1_difference(const KernelTable& table, double r, double eps, double x, const GaussLegendre& rule);
/// int_0^inf ds int_0^1 |G_s(x,y) - G_s(z,y)|^2 dy, via G_{2s}(x,x) + G_{2s}(z,z) - 2 G_{2s}(x,z)
double spatial_l2_increment(const KernelTable& table, double x, double z, int level);
/// t^alpha e^{-beta t} int_0^t s^{-alpha} log_+(1/s)^chi e^{beta s} ds
double weighted_time_integral(double t, double alpha, double chi, double beta, int level);
/// t^alpha e^{-beta t} int_0^t s^{-alpha} log_+(1/s)^chi e^{beta s} int_0^1 |G_{t-s}(x,y) - G_{t-s}(z,y)| dy ds
double spatial_l1_weighted_increment(const KernelTable& table, double t, double x, double z, double alpha, double chi,
                                     double beta, int level);
/// t^theta e^{-beta t} int_0^t s^{-theta} e^{beta s} int_0^1 |G_{t+eps-s}(x,y) - G_{t-s}(x,y)| dy ds
double temporal_l1_weighted_increment(const KernelTable& table, double t, double eps, double x, double theta,
                                      double beta, int level);

CheckReport check_kernel_lemma(const LemmaCheckSpec& spec);
std::vector<CheckReport> verify_lemmas(const std::vector<LemmaId>& ids, int workers = 0);

// ---------------------------------------------------------------------------------------------
// Monte Carlo checks

/// Var u(t,x) for b = 0, sigma = 1, u0 = 0:
/// sum_n 2 sin^2(n pi x)(1 - e^{-n^2 pi^2 t}) / (n^2 pi^2) = x(1-x) - sum_n 2 sin^2(n pi x) e^{-n^2 pi^2 t} / (n^2 pi^2).
/// Uses the exact eigenvalues; the table only supplies the series tolerance.
double variance_oracle_additive(const KernelTable& table, double t, double x);

struct MonteCarloOptions {
  int paths = 1000;
  int workers = 0;
  /// Repeat sup-based statistics at 2 n_x and require agreement within `stability`.
  bool refine = true;
  double stability = 0.10;
};

/// Time/space probe on the solver grid: row index and interior cell index.
struct Probe {
  int row = 0;
  int cell = 0;
};

/// Additive-noise variance at probes vs the oracle, 3 standard-error bands.
CheckReport check_isometry(const SolverConfig& cfg, const std::vector<Probe>& probes, const MonteCarloOptions& mc);
/// Default probes: rows at t in {T/8, T/4, T/2, T}, cells at x in {1/8, 1/4, 3/8, 1/2, 3/4}.
std::vector<Probe> default_probes(const SolverConfig& cfg);

/// 𝒩_{k,1/4,beta,T}(U_{n+1} - U_n) / 𝒩(U_n - U_{n-1}) for n = 2..n_iter-1, all <= 0.75.
CheckReport check_picard_contraction(const SolverConfig& cfg, int n_iter, double beta, double k,
                                     const MonteCarloOptions& mc);

/// Lebesgue convolution of X = 1: log-log slope of weighted norm ratio vs beta, -1 +- 0.2.
CheckReport check_lebesgue_scaling(const SolverConfig& cfg, double alpha, const std::vector<double>& betas,
                                   const MonteCarloOptions& mc);
/// Walsh convolution of X = 1: slope of E||W||_{C_T(alpha, 2 beta)} vs beta, -alpha +- 0.15.
CheckReport check_walsh_scaling(const SolverConfig& cfg, double alpha, const std::vector<double>& betas,
                                const MonteCarloOptions& mc);

/// Fraction of (path, t, x) with uA > uB + tol_scale * max|uB|; passes below 1e-3.
CheckReport check_comparison(const SolverConfig& cfgA, const SolverConfig& cfgB, const MonteCarloOptions& mc,
                             double tol_scale = 1e-6);
/// Slope of log M_T(u - u~) vs log eps for u~0 = u0 + eps g, 1 +- 0.2.
CheckReport check_stability(const SolverConfig& cfg, const InitialCondition& g, const std::vector<double>& eps,
                            const MonteCarloOptions& mc);
/// Median ||u(t) - u0||_{L^2} on dyadic t and the noise-only growth exponent.
CheckReport check_l2_continuity(const SolverConfig& cfg, const MonteCarloOptions& mc);
CheckReport check_l2_continuity(const Ensemble& ens);
/// S = sup_{t <= t0} t^alpha ||u(t)||_inf per path, its q^{2/3} tail slope and the small-t trend.
CheckReport check_decay_statistic(const SolverConfig& cfg, std::span<const double> cutoffs, double cutoff_alpha,
                                  double alpha, double t0, const MonteCarloOptions& mc);
CheckReport check_decay_statistic(const Ensemble& ens, double alpha, double t0);
/// E||X||^k over C_T(alpha_bar, 2 beta) against (1280 L)^k (𝒩_{k,alpha,beta,T} + C_T)^k.
CheckReport check_chaining(const Ensemble& ens, const ModulusSpec& spec, double alpha_bar);
CheckReport check_chaining(const SolverConfig& cfg, const ModulusSpec& spec, double alpha_bar,
                           const MonteCarloOptions& mc);
/// Smallest A' with E|u|^k <= (2A'/t)^{k/4} (||u0|| + sqrt k)^k e^{4 A' K_b k t} on the grid, k <= 8.
CheckReport check_moment_bound(const Ensemble& ens, const Envelope& envelope, double u0_norm,
                               const std::vector<double>& ks);
CheckReport check_moment_bound(const SolverConfig& cfg, const Envelope& envelope, const std::vector<double>& ks,
                               const MonteCarloOptions& mc);
/// Coupled patched runs with cutoffs N < N': max |u_N - u_N'| on (0, T_N), at most 1e-12.
CheckReport check_uniqueness(const SolverConfig& cfg, double N, double N_prime, double cutoff_alpha,
                             const MonteCarloOptions& mc);

/// L of the chaining inequality for beta_bar = 2 beta (independent of beta).
double chaining_constant(double alpha, double alpha_bar);

}  // namespace shelab
