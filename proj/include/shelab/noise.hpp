#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace shelab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/// Two independent standard normals determined by (seed, counter), via Box-Muller.
std::array<double, 2> counter_normal_pair(std::uint64_t seed, PhiloxCounter counter);

/// Space-time white noise on the interior cells of a uniform grid.
///
/// Cell j at step m carries w ~ N(0, dt/dx), so sum_j G sigma w dx has variance G^2 sigma^2 dt dx.
/// Values are a pure function of (master_seed, path_index, step, cell).
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint32_t path_index, int grid_points, double dt,
              double variance_scale = 1.0);

  std::uint64_t master_seed() const { return seed_; }
  std::uint32_t path_index() const { return path_; }
  int grid_points() const { return grid_points_; }
  double dt() const { return dt_; }
  double dx() const { return 1.0 / grid_points_; }
  double variance() const { return variance_; }

  std::vector<double> sample_increment(std::uint32_t step) const;
  void fill_increment(std::uint32_t step, std::span<double> out) const;

 private:
  std::uint64_t seed_;
  std::uint32_t path_;
  int grid_points_;
  double dt_;
  double variance_;
  double stddev_;
};

std::vector<double> sample_increment(const NoiseStream& stream, std::uint32_t step);

}  // namespace shelab
