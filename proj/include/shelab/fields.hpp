#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shelab/stats.hpp"

namespace shelab {

/// One sample path on (0, T] x [0, 1].
///
/// Row r holds the interior values at t = (r+1) dt; `initial` holds the t = 0 field on the same
/// interior grid. Boundary values are implicit zeros.
struct Trajectory {
  int grid_points = 0;  ///< n_x
  int steps = 0;        ///< n_t
  double horizon = 0.0; ///< T
  std::uint64_t master_seed = 0;
  std::uint32_t path_index = 0;
  std::string config_digest;
  std::vector<double> initial;
  std::vector<double> values;
  /// First row containing a non-finite value; that row and later rows are NaN.
  std::optional<int> blowup_row;
  /// Last valid row of a patched run that exhausted its cutoffs; later rows are NaN.
  std::optional<int> stop_row;

  static Trajectory zeros(int grid_points, int steps, double horizon);

  int cells() const { return grid_points - 1; }
  double dt() const { return horizon / steps; }
  double dx() const { return 1.0 / grid_points; }
  double time(int r) const { return (r + 1) * dt(); }
  /// Interior position of cell j (0-based), i.e. (j+1)/n_x.
  double x(int j) const { return (j + 1) * dx(); }
  bool blown_up() const { return blowup_row.has_value(); }

  std::span<double> row(int r);
  std::span<const double> row(int r) const;
  double& at(int r, int j) { return values[static_cast<size_t>(r) * cells() + j]; }
  double at(int r, int j) const { return values[static_cast<size_t>(r) * cells() + j]; }
  /// Value at full-grid index i in 0..n_x, with the Dirichlet zeros at i = 0 and i = n_x.
  double value_at(int r, int i) const;
  /// Row index r with time(r) <= T, or -1 if T < dt.
  int last_row_at_or_before(double T) const;
};

/// Trajectories sharing grid, horizon and coefficients; only the path index differs.
struct Ensemble {
  std::vector<Trajectory> members;

  int size() const { return static_cast<int>(members.size()); }
  /// Throws DomainError when members disagree on grid, horizon or config digest.
  void validate() const;
  int blowup_count() const;
};

/// max over grid points with t <= T of t^alpha e^{-beta t} |u(t,x)|
double weighted_sup_norm(const Trajectory& traj, double alpha, double beta, double T);

/// Pointwise power sums sum |X|^k and sum |X|^{2k} over observed fields of a fixed shape.
class MomentField {
 public:
  MomentField() = default;
  MomentField(int rows, int cols, std::vector<double> orders);

  void add(std::span<const double> field);
  void merge(const MomentField& other);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long count() const { return count_; }
  const std::vector<double>& orders() const { return orders_; }
  /// Empirical E|X|^k at flat index i for order index q.
  double moment(int q, size_t i) const;
  /// Standard error of that mean.
  double moment_stderr(int q, size_t i) const;

 private:
  int rows_ = 0, cols_ = 0;
  long count_ = 0;
  std::vector<double> orders_;
  std::vector<double> sums_;    // [q][i]
  std::vector<double> sums2_;   // [q][i]
};

struct WeightedSup {
  double value = 0.0;
  double stderr_ = 0.0;
  int row = -1;
  int col = -1;
};

/// sup over rows with time(r) <= T of t^alpha e^{-beta t} (E|X|^k)^{1/k}, with a delta-method
/// standard error at the maximiser. `times[r]` is the time of row r.
WeightedSup weighted_moment_sup(const MomentField& field, int order_index, std::span<const double> times,
                                double alpha, double beta, double T);

/// Moment norm N_{k,alpha,beta,T}: pointwise (E|X|^k)^{1/k} by the ensemble mean, then the weighted
/// grid sup; the standard error comes from 200 bootstrap resamples of the paths.
Estimate empirical_moment_norm(const Ensemble& ens, double k, double alpha, double beta, double T);

/// M_t = sup_{s <= t} sup_x s^{1/4} (E|X(s,x)|^2)^{1/2}
double m_norm(const Ensemble& ens, double t);

struct ModulusSpec {
  double tau = 0.25;   ///< temporal exponent
  double mu = 0.5;     ///< spatial exponent
  double alpha = 0.25;
  double beta = 1.0;
  double k = 2.0;

  /// k >= 4 (1/tau + 1/mu)
  bool chaining_hypothesis() const { return k >= 4.0 * (1.0 / tau + 1.0 / mu); }
};

/// Pair of grid points: the later point (r2, j2) at t + eps and the earlier (r1, j1) at t.
struct GridPair {
  int r1, j1, r2, j2;
};

/// All temporally adjacent pairs plus `random_pairs` pairs with dyadic time and space gaps.
std::vector<GridPair> holder_pairs(int steps, int cells, int random_pairs = 10000, std::uint64_t seed = 1);

/// Pointwise power sums of |X(r2,j2) - X(r1,j1)|^k over a fixed pair list.
class PairMoments {
 public:
  PairMoments() = default;
  PairMoments(std::vector<GridPair> pairs, double k);
  void add(const Trajectory& traj);
  void merge(const PairMoments& other);
  const std::vector<GridPair>& pairs() const { return pairs_; }
  double k() const { return k_; }
  long count() const { return count_; }
  double moment(size_t p) const { return sums_[p] / static_cast<double>(count_); }

 private:
  std::vector<GridPair> pairs_;
  double k_ = 2.0;
  long count_ = 0;
  std::vector<double> sums_;
};

/// sup over pairs of t^alpha e^{-beta t} ||X(t+eps,x) - X(t,y)||_k / (eps^tau v |x-y|^mu)
double holder_statistic(const PairMoments& moments, const ModulusSpec& spec, int steps, int cells, double horizon);
double holder_statistic(const Ensemble& ens, const ModulusSpec& spec);

/// Trajectory export. CSV: header line n_x,n_t,T,seed,path_index, then one row per time
/// (t followed by the n_x+1 grid values including boundary zeros). Binary: magic, header, row-major values.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_trajectory_binary(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_binary(const std::string& path);

}  // namespace shelab
