#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace shelab {

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

double mean(std::span<const double> x);
/// Unbiased sample variance.
double sample_variance(std::span<const double> x);
double standard_error(std::span<const double> x);
double median(std::vector<double> x);
/// Linear-interpolated empirical quantile, q in [0,1].
double quantile(std::vector<double> x, double q);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);
/// Least squares of log y on log x.
LinearFit log_log_fit(std::span<const double> x, std::span<const double> y);

/// Standard deviation of a statistic over bootstrap resamples of the index set {0..n-1}.
/// The statistic receives the resampled index list.
double bootstrap_stderr(int n, int resamples, std::uint64_t seed,
                        const std::function<double(std::span<const int>)>& statistic);

/// Worker count: requested > 0 wins, otherwise hardware concurrency; both capped by SHELAB_MAX_WORKERS.
int resolve_workers(int requested);

}  // namespace shelab
