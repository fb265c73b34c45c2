#include "shelab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

constexpr double kPi = std::numbers::pi;

void check_args(double t, double x) {
  if (!(t > 0.0)) throw DomainError("heat kernel: time must be > 0, got " + std::to_string(t));
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("heat kernel: position outside [0,1]: " + std::to_string(x));
}

/// P(b < Z < a) for standard normal Z, accurate in both tails.
double normal_interval(double b, double a) {
  if (a <= b) return 0.0;
  const double r = 1.0 / std::numbers::sqrt2;
  if (b >= 0.0) return 0.5 * (std::erfc(b * r) - std::erfc(a * r));
  if (a <= 0.0) return 0.5 * (std::erfc(-a * r) - std::erfc(-b * r));
  return 1.0 - 0.5 * std::erfc(a * r) - 0.5 * std::erfc(-b * r);
}

/// Number of images on each side so that the Gaussian tail is below tol.
int image_terms(double t, double tol) {
  const double reach = std::sqrt(2.0 * t * std::log(1.0 / tol)) + 2.0;
  return static_cast<int>(std::ceil(reach / 2.0)) + 1;
}

}  // namespace

double exact_eigenvalue(int n) { return 0.5 * kPi * kPi * static_cast<double>(n) * n; }

KernelTable::KernelTable(int grid_points, KernelOptions options)
    : grid_points_(grid_points), options_(options), transform_(grid_points) {
  if (!(options_.switch_time > 0.0)) throw DomainError("kernel: switch time must be > 0");
  if (!(options_.series_tolerance > 0.0 && options_.series_tolerance < 1.0))
    throw DomainError("kernel: series tolerance must be in (0,1)");
  if (!(options_.eigenvalue_scale > 0.0)) throw DomainError("kernel: eigenvalue scale must be > 0");
  eigenvalues_.resize(static_cast<size_t>(mode_count()));
  for (int n = 1; n <= mode_count(); ++n) eigenvalues_[static_cast<size_t>(n - 1)] = eigenvalue(n);
}

double KernelTable::eigenvalue(int n) const { return options_.eigenvalue_scale * exact_eigenvalue(n); }

int KernelTable::spectral_terms(double t) const {
  const double lam1 = options_.eigenvalue_scale * 0.5 * kPi * kPi;
  const double n = std::sqrt(std::log(1.0 / options_.series_tolerance) / (lam1 * t));
  return static_cast<int>(std::ceil(n)) + 2;
}

double KernelTable::eval_spectral(double t, double x, double y) const {
  check_args(t, x);
  check_args(t, y);
  const int terms = spectral_terms(t);
  double sum = 0.0;
  for (int n = 1; n <= terms; ++n)
    sum += std::sin(n * kPi * x) * std::sin(n * kPi * y) * std::exp(-eigenvalue(n) * t);
  return 2.0 * sum;
}

double KernelTable::eval_image(double t, double x, double y) const {
  check_args(t, x);
  check_args(t, y);
  const int m = image_terms(t, options_.series_tolerance);
  const double norm = 1.0 / std::sqrt(2.0 * kPi * t);
  const double inv2t = 0.5 / t;
  double sum = 0.0;
  for (int n = -m; n <= m; ++n) {
    const double a = x - y - 2.0 * n;
    const double b = x + y + 2.0 * n;
    sum += std::exp(-a * a * inv2t) - std::exp(-b * b * inv2t);
  }
  return norm * sum;
}

double KernelTable::eval(double t, double x, double y) const {
  const double g = t < options_.switch_time ? eval_image(t, x, y) : eval_spectral(t, x, y);
  // Dirichlet boundary: exactly zero rather than sin(n pi) round-off.
  if (x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0) return 0.0;
  return std::max(g, 0.0);
}

double KernelTable::mass_spectral(double t, double x) const {
  check_args(t, x);
  // Every odd mode contributes 2 sin(n pi x) (1 - cos n pi)/(n pi); the tail decays only like 1/n
  // times the Gaussian factor, so allow a few extra terms.
  const int terms = 2 * spectral_terms(t) + 8;
  double sum = 0.0;
  for (int n = 1; n <= terms; n += 2)
    sum += 4.0 * std::sin(n * kPi * x) / (n * kPi) * std::exp(-eigenvalue(n) * t);
  return sum;
}

double KernelTable::mass_image(double t, double x) const {
  check_args(t, x);
  const int m = image_terms(t, options_.series_tolerance);
  const double s = std::sqrt(t);
  double sum = 0.0;
  for (int n = -m; n <= m; ++n) {
    // int_0^1 gamma_t(x - y - 2n) dy and int_0^1 gamma_t(x + y + 2n) dy
    sum += normal_interval((x - 1.0 - 2.0 * n) / s, (x - 2.0 * n) / s);
    sum -= normal_interval((x + 2.0 * n) / s, (x + 1.0 + 2.0 * n) / s);
  }
  return sum;
}

double KernelTable::mass(double t, double x) const {
  const double m = t < options_.switch_time ? mass_image(t, x) : mass_spectral(t, x);
  return std::max(m, 0.0);
}

SineCoefficients KernelTable::semigroup_apply(const SineCoefficients& u0, double t) const {
  if (!(t >= 0.0)) throw DomainError("semigroup: time must be >= 0");
  if (t == 0.0) return u0;
  SineCoefficients out = u0;
  for (int n = 1; n <= out.mode_count(); ++n) out.coefficients[static_cast<size_t>(n - 1)] *= std::exp(-eigenvalue(n) * t);
  return out;
}

SineCoefficients KernelTable::to_coefficients(std::span<const double> interior_values) const {
  return SineCoefficients{transform_.forward(interior_values)};
}

std::vector<double> KernelTable::to_grid(const SineCoefficients& c) const {
  if (c.mode_count() == mode_count()) return transform_.inverse(c.coefficients);
  std::vector<double> padded(static_cast<size_t>(mode_count()), 0.0);
  std::copy_n(c.coefficients.begin(), std::min(c.mode_count(), mode_count()), padded.begin());
  return transform_.inverse(padded);
}

double eval_kernel(const KernelTable& table, double t, double x, double y) { return table.eval(t, x, y); }
double kernel_mass(const KernelTable& table, double t, double x) { return table.mass(t, x); }
SineCoefficients semigroup_apply(const KernelTable& table, const SineCoefficients& u0, double t) {
  return table.semigroup_apply(u0, t);
}

}  // namespace shelab
