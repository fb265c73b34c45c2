#pragma once

#include <span>
#include <vector>

#include "shelab/sine_transform.hpp"

namespace shelab {

/// Amplitudes of sin(n pi x), stored for n = 1..mode_count (index n-1).
struct SineCoefficients {
  std::vector<double> coefficients;

  int mode_count() const { return static_cast<int>(coefficients.size()); }
  double mode(int n) const { return coefficients.at(static_cast<size_t>(n - 1)); }

  bool operator==(const SineCoefficients&) const = default;
};

struct KernelOptions {
  /// Below this time the image sum is used, above it the sine series.
  double switch_time = 0.1;
  double series_tolerance = 1e-12;
  /// Multiplies every eigenvalue. Only meant for fault-injection runs.
  double eigenvalue_scale = 1.0;

  bool operator==(const KernelOptions&) const = default;
};

/// Dirichlet heat kernel on [0,1] for the generator (1/2) d^2/dx^2, tied to a uniform grid.
///
/// G_t(x,y) = 2 sum_n sin(n pi x) sin(n pi y) exp(-n^2 pi^2 t / 2)
///          = sum_n [gamma_t(x-y-2n) - gamma_t(x+y+2n)],  gamma_t(z) = exp(-z^2/2t)/sqrt(2 pi t).
/// Immutable after construction; safe to share between threads.
class KernelTable {
 public:
  explicit KernelTable(int grid_points, KernelOptions options = {});

  int grid_points() const { return grid_points_; }
  int mode_count() const { return grid_points_ - 1; }
  int interior_points() const { return grid_points_ - 1; }
  double dx() const { return 1.0 / grid_points_; }
  /// Interior grid point j/n_x, j = 1..n_x-1.
  double grid_x(int j) const { return static_cast<double>(j) / grid_points_; }

  const KernelOptions& options() const { return options_; }
  double switch_time() const { return options_.switch_time; }
  double series_tolerance() const { return options_.series_tolerance; }

  /// lambda_n for any n >= 1 (not limited to mode_count).
  double eigenvalue(int n) const;
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  const SineTransform& transform() const { return transform_; }

  double eval(double t, double x, double y) const;
  double eval_spectral(double t, double x, double y) const;
  double eval_image(double t, double x, double y) const;

  /// int_0^1 G_t(x,y) dy, i.e. the survival probability of the killed motion started at x.
  double mass(double t, double x) const;
  double mass_spectral(double t, double x) const;
  double mass_image(double t, double x) const;

  SineCoefficients semigroup_apply(const SineCoefficients& u0, double t) const;

  SineCoefficients to_coefficients(std::span<const double> interior_values) const;
  std::vector<double> to_grid(const SineCoefficients& c) const;

 private:
  int spectral_terms(double t) const;

  int grid_points_;
  KernelOptions options_;
  std::vector<double> eigenvalues_;
  SineTransform transform_;
};

double eval_kernel(const KernelTable& table, double t, double x, double y);
double kernel_mass(const KernelTable& table, double t, double x);
SineCoefficients semigroup_apply(const KernelTable& table, const SineCoefficients& u0, double t);

/// Exact lambda_n = n^2 pi^2 / 2, independent of any table (used by oracles).
double exact_eigenvalue(int n);

}  // namespace shelab
