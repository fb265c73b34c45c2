#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shelab/coefficients.hpp"
#include "shelab/errors.hpp"

using namespace shelab;
using std::numbers::e;

TEST_CASE("log_plus is log(a+e)") {
  CHECK(log_plus(0.0) == doctest::Approx(1.0));
  CHECK(log_plus(1.0) == doctest::Approx(std::log(1.0 + e)));
}

TEST_CASE("drift evaluation") {
  CHECK(eval_drift(DriftSpec::llogl(0, 1), 1.0) == doctest::Approx(1.3132616875182228).epsilon(1e-14));
  for (double z : {-5.0, 0.0, 3.3, 1e6}) CHECK(eval_drift(DriftSpec::llogl(2, 0), z) == 2.0);
  CHECK(eval_drift(DriftSpec::zero(), 7.3) == 0.0);
  CHECK(eval_drift(DriftSpec::linear(-1.5), 2.0) == -3.0);
  auto b = DriftSpec::llogl(0.7, 1.3);
  for (double z : {0.1, 1.0, 17.0, 1e4}) CHECK(b(-z) == b(z));
  CHECK_THROWS_AS(DriftSpec::llogl(-1, 1), ConfigError);
}

TEST_CASE("truncated drift") {
  auto id = DriftSpec::from_function([](double z) { return z; }, Envelope{0, 1, 1, 1, 4});
  auto tr = truncate_drift(id, e, 0.5);
  CHECK(tr(1.0, 10.0) == doctest::Approx(e));
  CHECK(tr(1.0, -10.0) == doctest::Approx(-e));
  CHECK(tr(0.25, 5.0) == 5.0);  // level 2e

  auto ll = truncate_drift(DriftSpec::llogl(0, 1), e, 0.5);
  CHECK(ll(1.0, -10.0) == doctest::Approx(e * std::log(2 * e)).epsilon(1e-14));
  CHECK(ll(1.0, -10.0) == doctest::Approx(4.6024).epsilon(1e-4));

  CHECK_THROWS_AS(truncate_drift(id, 2.0, 0.5), ConfigError);
  CHECK_THROWS_AS(truncate_drift(id, e, 0.25), ConfigError);
  CHECK_THROWS_AS(truncate_drift(id, e, 1.0), ConfigError);

  // Exact agreement inside the level, constant outside.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  auto base = DriftSpec::llogl(0.5, 1.0);
  auto t3 = truncate_drift(base, std::exp(3.0), 0.6);
  for (int i = 0; i < 5000; ++i) {
    const double t = std::pow(10.0, -6 * u(rng));
    const double lev = t3.level(t);
    const double z = (2 * u(rng) - 1) * lev;
    CHECK(t3(t, z) == base(z));
    CHECK(t3(t, lev * (1 + u(rng))) == base(lev));
    CHECK(t3(t, -lev * (1 + u(rng))) == base(-lev));
  }
}

TEST_CASE("envelopes") {
  auto env = compute_envelope(truncate_drift(DriftSpec::llogl(1, 1), e * e, 0.5));
  CHECK(env.M_b == 1.0);
  CHECK(env.K_b == doctest::Approx(8.0));
  CHECK(env.L_b == 2.0);
  CHECK(env.beta == doctest::Approx(32.0));

  auto env0 = compute_envelope(truncate_drift(DriftSpec::llogl(0, 0), e, 0.5));
  CHECK(env0.M_b == 0.0);
  CHECK(env0.K_b == doctest::Approx(2.0));
  CHECK(env0.L_b == 2.0);

  CHECK(compute_envelope(truncate_drift(DriftSpec::llogl(1, 1), e * e, 0.5), 2.0).beta == doctest::Approx(64.0));
  CHECK_THROWS_AS(compute_envelope(truncate_drift(DriftSpec::linear(1), e, 0.5)), UnsupportedEnvelope);
  CHECK_THROWS_AS(resolve_envelope(DriftSpec::zero(), e, 0.5), UnsupportedEnvelope);
  auto custom = DriftSpec::from_function([](double z) { return std::sin(z); }, Envelope{0.0, 3.0, 1.0, 1.0, 0.0});
  CHECK(resolve_envelope(custom, std::nullopt, 0.5, 2.0).beta == doctest::Approx(24.0));
}

TEST_CASE("growth certificate of the truncated drift") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (double theta2 : {0.0, 0.5, 1.0, 3.0})
    for (double N : {e, e * e, std::exp(3.0)})
      for (double alpha : {0.3, 0.5, 0.9}) {
        auto tr = truncate_drift(DriftSpec::llogl(0.8, theta2), N, alpha);
        auto env = compute_envelope(tr);
        for (int i = 0; i < 2000; ++i) {
          const double t = std::pow(10.0, -8 * u(rng));
          const double z = (2 * u(rng) - 1) * 3 * tr.level(t);
          const double rhs = env.M_b + std::abs(z) * (env.K_b + env.L_b * log_plus(1.0 / t));
          CHECK(std::abs(tr(t, z)) <= rhs * (1 + 1e-12));
        }
      }
}

TEST_CASE("sigma bounds and Lipschitz constants") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (const auto& s : {SigmaSpec::constant(1.0), SigmaSpec::sine(1.0, 0.5), SigmaSpec::tanh(-0.3, 0.7)}) {
    for (int i = 0; i < 5000; ++i) {
      const double z = u(rng), w = z + 1e-2 * u(rng);
      CHECK(std::abs(s(z)) <= s.bound() + 1e-15);
      CHECK(std::abs(s(z) - s(w)) <= s.lipschitz() * std::abs(z - w) + 1e-15);
    }
  }
  CHECK(SigmaSpec::sine(1.0, 0.5).bound() == 1.5);
  CHECK(SigmaSpec::sine(1.0, 0.5).lipschitz() == 0.5);
}

TEST_CASE("conditions and t0") {
  auto env = compute_envelope(truncate_drift(DriftSpec::llogl(0.5, 1), std::exp(3.0), 0.5));
  CHECK(env.K_b == doctest::Approx(12.0));
  CHECK(satisfies_envelope_condition(env, 1.5));
  CHECK_FALSE(satisfies_envelope_condition(env, 3.0));
  CHECK(default_t0(2.0, 1.0) == doctest::Approx(1.0 / 128.0));
}

TEST_CASE("Osgood trend") {
  CHECK(osgood_diagnostic(DriftSpec::llogl(0, 1)).diverging);
  CHECK(osgood_diagnostic(DriftSpec::linear(1)).diverging);
  CHECK(osgood_diagnostic(DriftSpec::zero()).diverging);
  auto superlinear = DriftSpec::from_function([](double z) { return std::pow(std::abs(z), 1.5); }, Envelope{});
  auto r = osgood_diagnostic(superlinear);
  CHECK_FALSE(r.diverging);
  CHECK(r.integrals.back() == doctest::Approx(2.0).epsilon(1e-4));  // int_1^inf x^{-3/2} = 2
}
