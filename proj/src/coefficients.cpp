#include "shelab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "shelab/errors.hpp"

namespace shelab {

double log_plus(double a) { return std::log(a + std::numbers::e); }

DriftSpec DriftSpec::llogl(double theta1, double theta2) {
  if (!(theta1 >= 0.0 && theta2 >= 0.0)) throw ConfigError("llogl drift needs theta1 >= 0 and theta2 >= 0");
  DriftSpec d;
  d.kind = DriftKind::llogl;
  d.theta1 = theta1;
  d.theta2 = theta2;
  return d;
}

DriftSpec DriftSpec::linear(double rate) {
  DriftSpec d;
  d.kind = DriftKind::linear;
  d.rate = rate;
  return d;
}

DriftSpec DriftSpec::zero() { return DriftSpec{}; }

DriftSpec DriftSpec::from_function(std::function<double(double)> fn, Envelope envelope) {
  if (!fn) throw ConfigError("custom drift needs a function");
  DriftSpec d;
  d.kind = DriftKind::custom;
  d.custom = std::move(fn);
  d.custom_envelope = envelope;
  return d;
}

double DriftSpec::operator()(double z) const {
  switch (kind) {
    case DriftKind::llogl: {
      const double a = std::abs(z);
      return theta1 + theta2 * a * log_plus(a);
    }
    case DriftKind::linear:
      return rate * z;
    case DriftKind::zero:
      return 0.0;
    case DriftKind::custom:
      return custom(z);
  }
  return 0.0;
}

std::string DriftSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DriftKind::llogl: os << "llogl(theta1=" << theta1 << ", theta2=" << theta2 << ")"; break;
    case DriftKind::linear: os << "linear(rate=" << rate << ")"; break;
    case DriftKind::zero: os << "zero"; break;
    case DriftKind::custom: os << "custom"; break;
  }
  return os.str();
}

double eval_drift(const DriftSpec& spec, double z) { return spec(z); }

SigmaSpec SigmaSpec::constant(double c) {
  SigmaSpec s;
  s.kind = SigmaKind::constant;
  s.offset = c;
  return s;
}

SigmaSpec SigmaSpec::sine(double offset, double amplitude) {
  SigmaSpec s;
  s.kind = SigmaKind::sine;
  s.offset = offset;
  s.amplitude = amplitude;
  return s;
}

SigmaSpec SigmaSpec::tanh(double offset, double amplitude) {
  SigmaSpec s;
  s.kind = SigmaKind::tanh;
  s.offset = offset;
  s.amplitude = amplitude;
  return s;
}

SigmaSpec SigmaSpec::from_function(std::function<double(double)> fn, double bound, double lipschitz) {
  if (!fn) throw ConfigError("custom sigma needs a function");
  if (!(bound >= 0.0 && lipschitz >= 0.0)) throw ConfigError("custom sigma needs finite bound and Lipschitz constant");
  SigmaSpec s;
  s.kind = SigmaKind::custom;
  s.custom = std::move(fn);
  s.custom_bound = bound;
  s.custom_lipschitz = lipschitz;
  return s;
}

double SigmaSpec::operator()(double z) const {
  switch (kind) {
    case SigmaKind::constant: return offset;
    case SigmaKind::sine: return offset + amplitude * std::sin(z);
    case SigmaKind::tanh: return offset + amplitude * std::tanh(z);
    case SigmaKind::custom: return custom(z);
  }
  return 0.0;
}

double SigmaSpec::bound() const {
  switch (kind) {
    case SigmaKind::constant: return std::abs(offset);
    case SigmaKind::sine:
    case SigmaKind::tanh: return std::abs(offset) + std::abs(amplitude);
    case SigmaKind::custom: return custom_bound;
  }
  return 0.0;
}

double SigmaSpec::lipschitz() const {
  switch (kind) {
    case SigmaKind::constant: return 0.0;
    case SigmaKind::sine:
    case SigmaKind::tanh: return std::abs(amplitude);
    case SigmaKind::custom: return custom_lipschitz;
  }
  return 0.0;
}

std::string SigmaSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case SigmaKind::constant: os << "constant(" << offset << ")"; break;
    case SigmaKind::sine: os << "sine(offset=" << offset << ", amplitude=" << amplitude << ")"; break;
    case SigmaKind::tanh: os << "tanh(offset=" << offset << ", amplitude=" << amplitude << ")"; break;
    case SigmaKind::custom: os << "custom(bound=" << custom_bound << ", lip=" << custom_lipschitz << ")"; break;
  }
  return os.str();
}

double TruncatedDrift::level(double t) const {
  if (t <= 0.0) return std::numeric_limits<double>::infinity();
  return N / std::pow(t, alpha);
}

double TruncatedDrift::operator()(double t, double z) const {
  const double c = level(t);
  if (z > c) return base(c);
  if (z < -c) return base(-c);
  return base(z);
}

TruncatedDrift truncate_drift(const DriftSpec& spec, double N, double alpha) {
  if (!(N >= std::numbers::e)) throw ConfigError("truncation cutoff N must be >= e");
  if (!(alpha > 0.25 && alpha < 1.0)) throw ConfigError("truncation exponent alpha must lie in (1/4, 1)");
  return TruncatedDrift{spec, N, alpha};
}

Envelope compute_envelope(const TruncatedDrift& trunc, double C) {
  if (trunc.base.kind != DriftKind::llogl)
    throw UnsupportedEnvelope("envelope formulas exist only for the llogl drift; supply one for " + trunc.base.describe());
  if (!(C > 0.0)) throw ConfigError("constant C must be > 0");
  Envelope e;
  e.M_b = std::abs(trunc.base(0.0));
  e.K_b = 2.0 * (trunc.base.theta2 + 1.0) * std::log(trunc.N);
  e.L_b = 2.0 * std::max(1.0, trunc.base.theta2);
  e.C = C;
  e.beta = 4.0 * C * e.K_b;
  return e;
}

Envelope resolve_envelope(const DriftSpec& drift, std::optional<double> cutoff, double alpha, double C) {
  if (drift.kind == DriftKind::custom) {
    if (!drift.custom_envelope) throw UnsupportedEnvelope("custom drift without a supplied envelope");
    Envelope e = *drift.custom_envelope;
    e.C = C;
    e.beta = 4.0 * C * e.K_b;
    return e;
  }
  if (!cutoff) throw UnsupportedEnvelope("envelope needs a truncated drift");
  return compute_envelope(truncate_drift(drift, *cutoff, alpha), C);
}

bool satisfies_envelope_condition(const Envelope& env, double sigma_bound) {
  return env.K_b > env.L_b * std::log(8.0 * env.K_b) + sigma_bound * sigma_bound + std::pow(env.M_b, 4);
}

bool satisfies_growth_condition(const Envelope& env, double A) {
  return env.L_b * std::log(8.0 * A * env.K_b) / env.K_b < 1.0;
}

double default_t0(double A, double theta2) {
  if (!(A > 0.0)) throw ConfigError("constant A must be > 0");
  return 1.0 / (32.0 * A * (theta2 + 1.0));
}

OsgoodReport osgood_diagnostic(const DriftSpec& drift, int decades) {
  OsgoodReport r;
  // x = e^v turns dx/b(x) into e^v/b(e^v) dv; composite Simpson on each decade.
  const int panels = 400;
  double total = 0.0;
  double lo = 0.0;
  for (int d = 1; d <= decades; ++d) {
    const double hi = d * std::log(10.0);
    const double h = (hi - lo) / panels;
    double acc = 0.0;
    for (int i = 0; i <= panels; ++i) {
      const double v = lo + i * h;
      const double b = drift(std::exp(v));
      if (!(b > 0.0)) {
        r.positive = false;
        acc = std::numeric_limits<double>::infinity();
        break;
      }
      const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * std::exp(v) / b;
    }
    total += acc * h / 3.0;
    r.upper_limits.push_back(std::pow(10.0, d));
    r.integrals.push_back(total);
    lo = hi;
    if (!r.positive) break;
  }
  if (!r.positive || r.integrals.size() < 3) {
    r.diverging = true;
    return r;
  }
  const size_t n = r.integrals.size();
  const double last = r.integrals[n - 1] - r.integrals[n - 2];
  const double prev = r.integrals[n - 2] - r.integrals[n - 3];
  // Harmonic-like increments (log log growth) keep a ratio near 1; convergent integrals shrink geometrically
  // or at least quadratically in the decade index.
  r.diverging = !(last < 0.9 * prev);
  return r;
}

}  // namespace shelab
