#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shelab/noise.hpp"

using namespace shelab;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("increments are reproducible") {
  NoiseStream a(42, 3, 128, 0.5 / 256), b(42, 3, 128, 0.5 / 256);
  CHECK(a.sample_increment(17) == b.sample_increment(17));
  CHECK(a.sample_increment(17) != a.sample_increment(18));
  CHECK(a.sample_increment(17).size() == 127);
}

TEST_CASE("pooled variance is dt/dx") {
  const double dt = 0.5 / 256;
  NoiseStream s(2024, 0, 128, dt);
  double sum = 0, sum2 = 0;
  size_t n = 0;
  for (std::uint32_t m = 0; n < 1000000; ++m)
    for (double w : s.sample_increment(m)) {
      sum += w;
      sum2 += w * w;
      ++n;
    }
  const double var = sum2 / n - (sum / n) * (sum / n);
  CHECK(std::abs(var / (dt * 128) - 1.0) < 0.01);
  CHECK(std::abs(sum / n) < 3 * std::sqrt(dt * 128 / n));
}

TEST_CASE("distinct paths, cells and steps are uncorrelated; sums over steps add variance") {
  const double dt = 1e-3;
  const int nx = 64;
  const double v = dt * nx;
  NoiseStream p0(7, 0, nx, dt), p1(7, 1, nx, dt);
  double cross_path = 0, cross_cell = 0, sum_k = 0, sum_k2 = 0;
  const int steps = 20000, k = 8;
  int blocks = 0;
  std::vector<double> acc(nx - 1, 0.0);
  for (int m = 0; m < steps; ++m) {
    auto a = p0.sample_increment(m), b = p1.sample_increment(m);
    for (int j = 0; j < nx - 1; ++j) {
      cross_path += a[j] * b[j];
      acc[j] += a[j];
    }
    for (int j = 0; j + 1 < nx - 1; ++j) cross_cell += a[j] * a[j + 1];
    if ((m + 1) % k == 0) {
      for (double x : acc) {
        sum_k += x;
        sum_k2 += x * x;
      }
      std::fill(acc.begin(), acc.end(), 0.0);
      ++blocks;
    }
  }
  const double n_path = double(steps) * (nx - 1), n_cell = double(steps) * (nx - 2);
  // Products of independent N(0,v) have standard deviation v.
  CHECK(std::abs(cross_path / n_path) < 3 * v / std::sqrt(n_path));
  CHECK(std::abs(cross_cell / n_cell) < 3 * v / std::sqrt(n_cell));
  const double nb = double(blocks) * (nx - 1);
  const double var_k = sum_k2 / nb - (sum_k / nb) * (sum_k / nb);
  // Sample variance of a Gaussian has relative standard error sqrt(2/n).
  CHECK(std::abs(var_k / (k * v) - 1.0) < 3 * std::sqrt(2.0 / nb));
}

TEST_CASE("variance scale") {
  NoiseStream s(1, 0, 32, 0.01, 1.1);
  CHECK(s.variance() == doctest::Approx(1.1 * 0.01 * 32));
}
