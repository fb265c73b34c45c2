#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shelab/errors.hpp"
#include "shelab/kernel.hpp"

using namespace shelab;
using std::numbers::pi;

namespace {

/// Direct O(n^2) sine sum, independent of the FFT backend.
std::vector<double> naive_forward(const std::vector<double>& v, int nx) {
  std::vector<double> c(v.size());
  for (size_t n = 1; n <= v.size(); ++n) {
    double s = 0;
    for (size_t j = 1; j <= v.size(); ++j) s += v[j - 1] * std::sin(pi * n * j / nx);
    c[n - 1] = 2.0 * s / nx;
  }
  return c;
}

}  // namespace

TEST_CASE("kernel point values") {
  KernelTable k(64);
  CHECK(eval_kernel(k, 0.1, 0.5, 0.5) == doctest::Approx(1.2445655330056031).epsilon(1e-11));
  CHECK(eval_kernel(k, 0.3, 0.0, 0.7) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eval_kernel(k, 2.0, 0.5, 0.5) == doctest::Approx(2.0 * std::exp(-pi * pi)).epsilon(1e-11));
  CHECK(eval_kernel(k, 0.01, 0.3, 0.35) == doctest::Approx(3.5206532649734386).epsilon(1e-11));
  CHECK(eval_kernel(k, 0.5, 0.2, 0.9) == doctest::Approx(0.03074938161224065).epsilon(1e-11));
}

TEST_CASE("kernel domain errors") {
  KernelTable k(16);
  CHECK_THROWS_AS(eval_kernel(k, 0.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(eval_kernel(k, -1.0, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(eval_kernel(k, 0.1, 1.5, 0.5), DomainError);
  CHECK_THROWS_AS(eval_kernel(k, 0.1, 0.5, -0.1), DomainError);
  CHECK_THROWS_AS(kernel_mass(k, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(KernelTable(1), DomainError);
}

TEST_CASE("eigenvalues") {
  KernelTable k(32);
  CHECK(k.eigenvalue(1) == doctest::Approx(pi * pi / 2).epsilon(1e-15));
  for (int n = 2; n <= k.mode_count(); ++n) CHECK(k.eigenvalues()[n - 1] > k.eigenvalues()[n - 2]);
}

TEST_CASE("spectral and image forms agree, symmetry, pointwise bound") {
  KernelTable k(64);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = std::pow(10.0, -4.0 + 4.0 * u(rng));
    const double x = u(rng), y = u(rng);
    const double gs = k.eval_spectral(t, x, y), gi = k.eval_image(t, x, y);
    CHECK(std::abs(gs - gi) <= 1e-8);
    CHECK(std::abs(k.eval(t, x, y) - k.eval(t, y, x)) <= 1e-12);
    const double g = k.eval(t, x, y);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 / std::sqrt(t) + 1e-9);
  }
}

TEST_CASE("kernel mass") {
  KernelTable k(64);
  CHECK(kernel_mass(k, 1e-4, 0.5) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(kernel_mass(k, 0.5, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  // Large-time limit: first mode only, 4/pi sin(pi x) e^{-pi^2 t/2}.
  CHECK(kernel_mass(k, 3.0, 0.5) == doctest::Approx(4.0 / pi * std::exp(-1.5 * pi * pi)).epsilon(1e-10));
  for (double t : {1e-6, 1e-3, 0.05, 0.099, 0.1, 0.3, 1.0, 5.0})
    for (int i = 0; i <= 40; ++i) {
      const double x = i / 40.0;
      const double m = kernel_mass(k, t, x);
      CHECK(m >= 0.0);
      CHECK(m <= 1.0 + 1e-9);
      if (t >= 1e-3) CHECK(std::abs(k.mass_spectral(t, x) - k.mass_image(t, x)) <= 1e-9);
    }
}

TEST_CASE("Chapman-Kolmogorov by Gauss-Legendre on a fine composite grid") {
  KernelTable k(64);
  // 400 panels x 5-point Gauss rule on [0,1].
  const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                        0.2369268850561891};
  struct Case { double s, t, x, z; };
  for (const auto& c : {Case{0.01, 0.02, 0.3, 0.4}, Case{0.05, 0.2, 0.1, 0.8}, Case{0.3, 0.5, 0.5, 0.5},
                        Case{0.002, 0.004, 0.45, 0.5}}) {
    const int panels = 400;
    double sum = 0;
    for (int p = 0; p < panels; ++p) {
      const double a = static_cast<double>(p) / panels, h = 1.0 / panels;
      for (int i = 0; i < 5; ++i) {
        const double y = a + 0.5 * h * (gx[i] + 1.0);
        sum += 0.5 * h * gw[i] * k.eval(c.s, c.x, y) * k.eval(c.t, y, c.z);
      }
    }
    CHECK(sum == doctest::Approx(k.eval(c.s + c.t, c.x, c.z)).epsilon(1e-6));
  }
}

TEST_CASE("semigroup on sine modes") {
  KernelTable k(32);
  SineCoefficients u0{std::vector<double>(31, 0.0)};
  u0.coefficients[0] = 1.0;
  auto v = semigroup_apply(k, u0, 0.2);
  CHECK(v.mode(1) == doctest::Approx(std::exp(-pi * pi * 0.1)).epsilon(1e-14));
  for (int n = 2; n <= 31; ++n) CHECK(v.mode(n) == 0.0);

  SineCoefficients u2{std::vector<double>(31, 0.0)};
  u2.coefficients[1] = 1.0;
  CHECK(semigroup_apply(k, u2, 0.5).mode(2) == doctest::Approx(5.172318e-5).epsilon(1e-6));

  SineCoefficients arbitrary{std::vector<double>(31)};
  for (int n = 0; n < 31; ++n) arbitrary.coefficients[n] = std::cos(1.0 + n);
  CHECK(semigroup_apply(k, arbitrary, 0.0) == arbitrary);
  CHECK_THROWS_AS(semigroup_apply(k, arbitrary, -0.1), DomainError);
}

TEST_CASE("sine transform") {
  const int nx = 128;
  SineTransform tr(nx);
  std::vector<double> v(nx - 1);
  for (int j = 1; j < nx; ++j) v[j - 1] = std::sin(3 * pi * j / nx);
  auto c = tr.forward(v);
  for (int n = 1; n < nx; ++n) CHECK(std::abs(c[n - 1] - (n == 3 ? 1.0 : 0.0)) <= 1e-10);

  std::vector<double> zero(nx - 1, 0.0);
  for (double x : tr.forward(zero)) CHECK(x == 0.0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (auto& x : v) x = g(rng);
  auto c2 = tr.forward(v);
  auto ref = naive_forward(v, nx);
  auto back = tr.inverse(c2);
  for (int j = 0; j < nx - 1; ++j) {
    CHECK(std::abs(c2[j] - ref[j]) <= 1e-12);
    CHECK(std::abs(back[j] - v[j]) <= 1e-10);
  }
  std::vector<double> wrong(5);
  CHECK_THROWS_AS(tr.forward(wrong), DomainError);
}

TEST_CASE("grid round trip through the table") {
  KernelTable k(50);
  std::vector<double> v(49);
  for (int j = 0; j < 49; ++j) v[j] = std::exp(-j * 0.1) * std::sin(0.3 * j);
  auto back = k.to_grid(k.to_coefficients(v));
  for (int j = 0; j < 49; ++j) CHECK(back[j] == doctest::Approx(v[j]).epsilon(1e-10));
}
