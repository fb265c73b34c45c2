#pragma once

#include <memory>
#include <span>
#include <vector>

namespace shelab {

/// Discrete sine transform on the interior grid x_j = j/n_x, j = 1..n_x-1.
///
/// forward: c_n = (2/n_x) sum_j v_j sin(n pi j / n_x), n = 1..n_x-1
/// inverse: v_j = sum_n c_n sin(n pi j / n_x)
/// so a sampled sin(k pi x) maps to the unit vector on mode k.
class SineTransform {
 public:
  explicit SineTransform(int grid_points);

  int grid_points() const { return grid_points_; }
  int size() const { return grid_points_ - 1; }

  void forward(std::span<const double> values, std::span<double> coefficients) const;
  void inverse(std::span<const double> coefficients, std::span<double> values) const;

  std::vector<double> forward(std::span<const double> values) const;
  std::vector<double> inverse(std::span<const double> coefficients) const;

 private:
  struct Plan;
  int grid_points_;
  std::shared_ptr<const Plan> plan_;
};

}  // namespace shelab
