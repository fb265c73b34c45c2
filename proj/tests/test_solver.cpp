#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shelab/errors.hpp"
#include "shelab/solver.hpp"
#include "shelab/stats.hpp"

using namespace shelab;

namespace {

constexpr double kPi = std::numbers::pi;

SolverConfig heat_config(int nx = 64, int nt = 128, double T = 0.5) {
  SolverConfig c;
  c.grid_points = nx;
  c.steps = nt;
  c.horizon = T;
  c.sigma = SigmaSpec::constant(0.0);
  c.initial = InitialCondition::sine(1);
  return c;
}

double max_abs_diff(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

/// int_0^1 x^{-1/4}(1-x) sin(n pi x) dx via x = u^4 and composite Simpson.
double singular_moment(int n) {
  const int K = 200000;
  auto f = [n](double u) {
    const double x = u * u * u * u;
    return 4.0 * u * u * (1.0 - x) * std::sin(n * kPi * x);
  };
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < K; ++i) s += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / K);
  return s / (3.0 * K);
}

}  // namespace

TEST_CASE("initial condition coefficients by quadrature") {
  const int nx = 128;
  const auto c = InitialCondition::constant(1.0).coefficients(nx);
  const auto ind = InitialCondition::indicator(0.25, 0.75).coefficients(nx);
  const auto sing = InitialCondition::singular().coefficients(nx);
  for (int n = 1; n < nx; ++n) {
    CHECK(std::abs(c.mode(n) - 2.0 * (1.0 - std::pow(-1.0, n)) / (n * kPi)) < 1e-12);
    const double exact = 2.0 * (std::cos(n * kPi * 0.25) - std::cos(n * kPi * 0.75)) / (n * kPi);
    CHECK(std::abs(ind.mode(n) - exact) < 1e-12);
  }
  for (int n : {1, 2, 7, 50, 127}) CHECK(std::abs(sing.mode(n) - 2.0 * singular_moment(n)) < 1e-10);
  CHECK(InitialCondition::singular().l2_norm() == doctest::Approx(std::sqrt(2.0 - 4.0 / 3.0 + 0.4)).epsilon(1e-10));

  const auto s = InitialCondition::sine(3, 2.0).coefficients(nx);
  CHECK(s.mode(3) == 2.0);
  CHECK(s.mode(1) == 0.0);
  CHECK_THROWS_AS(InitialCondition::sine(nx).coefficients(nx), ConfigError);
  CHECK_THROWS_AS(InitialCondition::indicator(0.8, 0.2), ConfigError);

  std::vector<double> v(nx - 1);
  for (int j = 0; j < nx - 1; ++j) v[j] = std::sin(2 * kPi * (j + 1.0) / nx);
  const auto sc = InitialCondition::from_samples(v).coefficients(nx);
  CHECK(std::abs(sc.mode(2) - 1.0) < 1e-13);
  CHECK_THROWS_AS(InitialCondition::from_samples({1.0}).coefficients(nx), ConfigError);
}

TEST_CASE("config validation and digest") {
  SolverConfig c = heat_config();
  CHECK_NOTHROW(c.validate());
  c.horizon = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.allow_long_horizon = true;
  CHECK_NOTHROW(c.validate());
  c = heat_config();
  c.grid_points = 1;
  CHECK_THROWS_AS(Solver{c}, ConfigError);
  c = heat_config();
  c.drift = DriftSpec::llogl(0, 1);
  c.truncation = Truncation{2.0, 0.5};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  SolverConfig a = heat_config(), b = heat_config();
  CHECK(a.digest() == b.digest());
  b.master_seed = 7;
  CHECK(a.digest() != b.digest());
  CHECK(parse_noise_scheme("left_point") == NoiseScheme::left_point);
  CHECK_THROWS_AS(parse_noise_scheme("midpoint"), ConfigError);
}

TEST_CASE("deterministic heat flow and pure decay step") {
  const Solver s(heat_config());
  const auto traj = s.simulate(0);
  double err = 0.0;
  for (int r = 0; r < traj.steps; ++r)
    for (int j = 0; j < traj.cells(); ++j)
      err = std::max(err, std::abs(traj.at(r, j) - std::exp(-kPi * kPi * traj.time(r) / 2) * std::sin(kPi * traj.x(j))));
  CHECK(err < 1e-8);
  CHECK_FALSE(traj.blown_up());

  std::vector<double> state(63), zero(63, 0.0);
  for (int j = 0; j < 63; ++j) state[j] = std::sin(3 * kPi * (j + 1) / 64.0) + 0.2 * std::sin(9 * kPi * (j + 1) / 64.0);
  const auto next = s.step(state, 0.0, zero);
  const auto c = s.kernel().to_coefficients(next);
  CHECK(c.mode(3) == doctest::Approx(std::exp(-exact_eigenvalue(3) * s.config().dt())).epsilon(1e-12));
  CHECK(c.mode(9) == doctest::Approx(0.2 * std::exp(-exact_eigenvalue(9) * s.config().dt())).epsilon(1e-12));
  CHECK(std::abs(c.mode(1)) < 1e-13);
}

TEST_CASE("one-step mode variances") {
  for (auto scheme : {NoiseScheme::left_point, NoiseScheme::exact_variance}) {
    SolverConfig cfg;
    cfg.grid_points = 32;
    cfg.steps = 64;
    cfg.horizon = 0.5;
    cfg.noise_scheme = scheme;
    const Solver s(cfg);
    const double dt = cfg.dt();
    const int paths = 4000;
    std::vector<double> zero(31, 0.0);
    std::vector<std::vector<double>> samples(31);
    for (int p = 0; p < paths; ++p) {
      const auto w = s.noise(static_cast<std::uint32_t>(p)).sample_increment(0);
      const auto c = s.kernel().to_coefficients(s.step(zero, 0.0, w));
      for (int n = 1; n <= 31; ++n) samples[n - 1].push_back(c.mode(n));
    }
    // Top modes of the literal scheme sit below round-off (e^{-2 lambda dt} ~ e^{-74}).
    for (int n : {1, 4, 16}) {
      const double lam = exact_eigenvalue(n);
      const double expected = scheme == NoiseScheme::left_point ? 2.0 * dt * std::exp(-2.0 * lam * dt)
                                                                : -std::expm1(-2.0 * lam * dt) / lam;
      const double v = sample_variance(samples[n - 1]);
      CHECK(std::abs(v - expected) < 3.0 * expected * std::sqrt(2.0 / (paths - 1)));
    }
  }
}

TEST_CASE("linear drift matches exponential growth with first-order error") {
  auto err_at = [](int nt) {
    SolverConfig c = heat_config(32, nt, 1.0);
    c.drift = DriftSpec::linear(2.0);
    const auto traj = simulate(c, 0);
    double e = 0.0;
    for (int j = 0; j < traj.cells(); ++j) {
      const double exact = std::exp((2.0 - kPi * kPi / 2) * 1.0) * std::sin(kPi * traj.x(j));
      e = std::max(e, std::abs(traj.at(nt - 1, j) - exact) / std::exp((2.0 - kPi * kPi / 2)));
    }
    return e;
  };
  const double e1 = err_at(100), e2 = err_at(200);
  // per step (1 + r dt) e^{-r dt} = 1 - r^2 dt^2 / 2 + ..., so about r^2 T dt / 2 overall
  CHECK(e1 < 4.0 / 100);
  CHECK(e2 / e1 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("Lebesgue convolution oracles and linearity") {
  const Solver s(heat_config(64, 512, 0.5));
  auto F = s.blank(0);
  std::fill(F.initial.begin(), F.initial.end(), 1.0);
  std::fill(F.values.begin(), F.values.end(), 1.0);
  const auto L1 = s.lebesgue_convolve(F);
  double excess = -1.0;
  for (int r = 0; r < L1.steps; ++r)
    for (int j = 0; j < L1.cells(); ++j) excess = std::max(excess, L1.at(r, j) - L1.time(r));
  CHECK(excess <= 1e-9);

  auto S = s.blank(0);
  for (int j = 0; j < S.cells(); ++j) S.initial[j] = std::sin(kPi * S.x(j));
  for (int r = 0; r < S.steps; ++r)
    for (int j = 0; j < S.cells(); ++j) S.at(r, j) = std::sin(kPi * S.x(j));
  const auto LS = s.lebesgue_convolve(S);
  double err = 0.0;
  for (int r = 0; r < LS.steps; ++r)
    for (int j = 0; j < LS.cells(); ++j) {
      const double exact = 2.0 / (kPi * kPi) * (1.0 - std::exp(-kPi * kPi * LS.time(r) / 2)) * std::sin(kPi * LS.x(j));
      err = std::max(err, std::abs(LS.at(r, j) - exact));
    }
  CHECK(err < s.config().dt());

  auto Z = s.blank(0);
  std::fill(Z.initial.begin(), Z.initial.end(), 0.0);
  CHECK(max_abs_diff(s.lebesgue_convolve(Z), Z) == 0.0);

  auto C = S;
  for (size_t i = 0; i < C.values.size(); ++i) C.values[i] = 3.0 * S.values[i] + F.values[i];
  for (size_t i = 0; i < C.initial.size(); ++i) C.initial[i] = 3.0 * S.initial[i] + F.initial[i];
  auto expected = LS;
  for (size_t i = 0; i < expected.values.size(); ++i) expected.values[i] = 3.0 * LS.values[i] + L1.values[i];
  CHECK(max_abs_diff(s.lebesgue_convolve(C), expected) < 1e-12);
  CHECK(max_abs_diff(lebesgue_convolve(S, s.kernel()), LS) < 1e-15);
}

TEST_CASE("Walsh convolution: zero, linearity, and agreement with additive simulate") {
  SolverConfig cfg;
  cfg.grid_points = 32;
  cfg.steps = 64;
  cfg.horizon = 0.25;
  cfg.master_seed = 11;
  const Solver s(cfg);
  const auto stream = s.noise(3);
  auto one = s.blank(3);
  std::fill(one.initial.begin(), one.initial.end(), 1.0);
  std::fill(one.values.begin(), one.values.end(), 1.0);
  const auto W1 = s.walsh_convolve(one, stream);
  CHECK(max_abs_diff(W1, s.simulate(3)) < 1e-13);

  auto zero = s.blank(3);
  CHECK(max_abs_diff(s.walsh_convolve(zero, stream), zero) == 0.0);

  auto X = s.blank(3);
  for (int j = 0; j < X.cells(); ++j) X.initial[j] = std::cos(X.x(j));
  for (int r = 0; r < X.steps; ++r)
    for (int j = 0; j < X.cells(); ++j) X.at(r, j) = std::sin(5 * X.time(r) + X.x(j));
  const auto WX = s.walsh_convolve(X, stream);
  auto combo = X;
  for (size_t i = 0; i < combo.values.size(); ++i) combo.values[i] = -2.0 * X.values[i] + 1.0;
  for (size_t i = 0; i < combo.initial.size(); ++i) combo.initial[i] = -2.0 * X.initial[i] + 1.0;
  auto expected = WX;
  for (size_t i = 0; i < expected.values.size(); ++i) expected.values[i] = -2.0 * WX.values[i] + W1.values[i];
  CHECK(max_abs_diff(s.walsh_convolve(combo, stream), expected) < 1e-12);
  CHECK(max_abs_diff(walsh_convolve(X, s.kernel(), stream), WX) < 1e-15);
}

TEST_CASE("ensemble mean follows the semigroup") {
  SolverConfig cfg;
  cfg.grid_points = 32;
  cfg.steps = 64;
  cfg.horizon = 0.5;
  cfg.initial = InitialCondition::indicator();
  cfg.sigma = SigmaSpec::sine(1.0, 0.5);
  const Solver s(cfg);
  const int paths = 1000;
  const int r = 31, j = 10;
  std::vector<double> vals;
  for (int p = 0; p < paths; ++p) vals.push_back(s.simulate(static_cast<std::uint32_t>(p)).at(r, j));
  const auto g = s.kernel().to_grid(s.kernel().semigroup_apply(s.initial_coefficients(), (r + 1) * cfg.dt()));
  CHECK(std::abs(mean(vals) - g[j]) < 3.0 * standard_error(vals));
}

TEST_CASE("decomposition sums to the total") {
  SolverConfig cfg;
  cfg.grid_points = 32;
  cfg.steps = 64;
  cfg.horizon = 0.5;
  cfg.initial = InitialCondition::singular();
  cfg.drift = DriftSpec::llogl(0.5, 1.0);
  cfg.truncation = Truncation{std::exp(3.0), 0.5};
  cfg.sigma = SigmaSpec::sine(1.0, 0.5);
  const Solver s(cfg);
  const auto d = s.simulate_decomposed(2);
  double err = 0.0;
  for (size_t i = 0; i < d.total.values.size(); ++i)
    err = std::max(err, std::abs(d.total.values[i] - d.semigroup.values[i] - d.drift.values[i] - d.noise.values[i]));
  CHECK(err < 1e-12);
  CHECK(max_abs_diff(d.total, s.simulate(2)) == 0.0);
}

TEST_CASE("Picard iteration") {
  SolverConfig cfg = heat_config(32, 16, 0.5);
  cfg.drift = DriftSpec::linear(1.0);
  auto it = picard_run(cfg, 0, 0);
  REQUIRE(it.size() == 1);
  CHECK(max_abs_diff(it[0], simulate(heat_config(32, 16, 0.5), 0)) < 1e-14);

  it = picard_run(cfg, 20, 0);
  REQUIRE(it.size() == 21);
  CHECK(max_abs_diff(it.back(), simulate(cfg, 0)) < 1e-12);
  double prev = max_abs_diff(it[1], it[0]);
  for (size_t n = 2; n < 10; ++n) {
    const double d = max_abs_diff(it[n], it[n - 1]);
    CHECK(d < 0.75 * prev);
    prev = d;
  }

  SolverConfig noisy = cfg;
  noisy.drift = DriftSpec::llogl(0.5, 1.0);
  noisy.truncation = Truncation{std::exp(3.0), 0.5};
  noisy.sigma = SigmaSpec::sine(1.0, 0.5);
  noisy.initial = InitialCondition::singular();
  const auto pit = picard_run(noisy, 20, 5);
  CHECK(max_abs_diff(pit.back(), simulate(noisy, 5)) < 1e-10);
}

TEST_CASE("stopping times") {
  SolverConfig cfg;
  cfg.grid_points = 32;
  cfg.steps = 64;
  cfg.horizon = 0.5;
  cfg.initial = InitialCondition::sine(1);
  const auto traj = simulate(cfg, 1);
  CHECK(std::isinf(detect_stop(traj, 1e9, 0.5).stop_time));

  auto syn = Trajectory::zeros(16, 20, 1.0);
  for (int r = 7; r < 20; ++r) syn.at(r, 3) = 100.0;
  syn.at(7, 3) = 2.0 / std::pow(syn.time(7), 0.5) + 1e-9;
  const auto rec = detect_stop(syn, 2.0, 0.5);
  CHECK(rec.stop_row == 7);
  CHECK(rec.stop_time == syn.time(7));

  const auto small = detect_stop(traj, 1e-3, 0.5);
  CHECK(small.stop_row == 0);
  CHECK(small.stop_time == cfg.dt());
}

TEST_CASE("patched simulation") {
  SolverConfig cfg;
  cfg.grid_points = 32;
  cfg.steps = 64;
  cfg.horizon = 0.5;
  cfg.initial = InitialCondition::sine(1);
  const std::vector<double> Ns{std::exp(2.0), std::exp(3.0)};
  const auto run = patched_simulate(cfg, Ns, 0.5, 4);
  REQUIRE(run.accepted);
  CHECK(*run.accepted == 0);
  CHECK(max_abs_diff(run.trajectory, simulate(cfg, 4)) == 0.0);

  cfg.drift = DriftSpec::llogl(10.0, 2.0);
  cfg.initial = InitialCondition::sine(1, 10.0);
  cfg.sigma = SigmaSpec::sine(1.0, 0.5);
  cfg.master_seed = 9;
  SolverConfig a = cfg, b = cfg;
  a.truncation = Truncation{1.5 * std::exp(1.0), 0.5};
  b.truncation = Truncation{std::exp(3.0), 0.5};
  const auto ua = simulate(a, 0), ub = simulate(b, 0);
  const auto stop = detect_stop(ua, a.truncation->N, 0.5);
  REQUIRE(stop.stopped());
  double diff = 0.0;
  for (int r = 0; r < stop.stop_row; ++r)
    for (int j = 0; j < ua.cells(); ++j) diff = std::max(diff, std::abs(ua.at(r, j) - ub.at(r, j)));
  CHECK(diff <= 1e-12);

  const std::vector<double> tiny{1.5 * std::exp(1.0)};
  const auto partial = patched_simulate(cfg, tiny, 0.5, 0);
  CHECK_FALSE(partial.accepted);
  REQUIRE(partial.trajectory.stop_row);
  CHECK(*partial.trajectory.stop_row == stop.stop_row - 1);
  CHECK(std::isnan(partial.trajectory.values.back()));

  SolverConfig truncated = cfg;
  truncated.truncation = Truncation{20.0, 0.5};
  CHECK_THROWS_AS(patched_simulate(truncated, Ns, 0.5, 0), ConfigError);
}

TEST_CASE("blow-up is recorded, not thrown") {
  SolverConfig cfg;
  cfg.grid_points = 16;
  cfg.steps = 200;
  cfg.horizon = 1.0;
  cfg.sigma = SigmaSpec::constant(0.0);
  cfg.initial = InitialCondition::constant(5.0);
  cfg.drift = DriftSpec::from_function([](double z) { return z * z * z; }, Envelope{});
  const auto traj = simulate(cfg, 0);
  REQUIRE(traj.blown_up());
  const int r = *traj.blowup_row;
  CHECK(r > 0);
  CHECK(std::isfinite(traj.at(r - 1, 7)));
  CHECK(std::isnan(traj.at(r, 7)));
  CHECK(std::isnan(traj.values.back()));
  CHECK(detect_stop(traj, 1e300, 0.5).stop_row <= r);
}
