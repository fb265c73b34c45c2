#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace shelab {

/// log(a + e); always >= 1 for a >= 0.
double log_plus(double a);

/// Constants bounding a (truncated) drift: |b(t,0)| <= M_b and
/// Lip(b(t,.)) <= K_b + L_b log_plus(1/t). beta = 4 C K_b is the matching norm weight.
struct Envelope {
  double M_b = 0.0;
  double K_b = 1.0;
  double L_b = 1.0;
  double C = 1.0;
  double beta = 4.0;

  bool operator==(const Envelope&) const = default;
};

enum class DriftKind { llogl, linear, zero, custom };

struct DriftSpec {
  DriftKind kind = DriftKind::zero;
  double theta1 = 0.0;  ///< llogl constant term
  double theta2 = 0.0;  ///< llogl coefficient of |z| log_plus|z|
  double rate = 0.0;    ///< linear: b(z) = rate * z
  std::function<double(double)> custom;
  /// Custom drifts must carry their own envelope; nothing is derived for them.
  std::optional<Envelope> custom_envelope;

  static DriftSpec llogl(double theta1, double theta2);
  static DriftSpec linear(double rate);
  static DriftSpec zero();
  static DriftSpec from_function(std::function<double(double)> fn, Envelope envelope);

  double operator()(double z) const;
  std::string describe() const;
};

double eval_drift(const DriftSpec& spec, double z);

enum class SigmaKind { constant, sine, tanh, custom };

/// Bounded Lipschitz diffusion coefficient.
///   constant: sigma(z) = offset
///   sine:     sigma(z) = offset + amplitude sin(z)
///   tanh:     sigma(z) = offset + amplitude tanh(z)
struct SigmaSpec {
  SigmaKind kind = SigmaKind::constant;
  double offset = 1.0;
  double amplitude = 0.0;
  std::function<double(double)> custom;
  double custom_bound = 0.0;
  double custom_lipschitz = 0.0;

  static SigmaSpec constant(double c);
  static SigmaSpec sine(double offset, double amplitude);
  static SigmaSpec tanh(double offset, double amplitude);
  static SigmaSpec from_function(std::function<double(double)> fn, double bound, double lipschitz);

  double operator()(double z) const;
  /// M_sigma
  double bound() const;
  double lipschitz() const;
  std::string describe() const;
};

/// Time-dependent cutoff: b is frozen outside [-N/t^alpha, N/t^alpha].
struct TruncatedDrift {
  DriftSpec base;
  double N = 0.0;
  double alpha = 0.5;

  double level(double t) const;
  double operator()(double t, double z) const;
};

TruncatedDrift truncate_drift(const DriftSpec& spec, double N, double alpha);

/// Envelope of an L log L drift truncated at N: M_b = |theta1|, K_b = 2(theta2+1) log N,
/// L_b = 2 max(1, theta2), beta = 4 C K_b.
Envelope compute_envelope(const TruncatedDrift& trunc, double C = 1.0);

/// Envelope for any drift: derived for truncated llogl, supplied for custom drifts.
Envelope resolve_envelope(const DriftSpec& drift, std::optional<double> cutoff, double alpha, double C = 1.0);

/// K_b > L_b log(8 K_b) + M_sigma^2 + M_b^4
bool satisfies_envelope_condition(const Envelope& env, double sigma_bound);
/// L_b log(8 A K_b) / K_b < 1
bool satisfies_growth_condition(const Envelope& env, double A);

/// t_0 = 1/(32 A (theta2 + 1)), the window of the small-time decay statement.
double default_t0(double A, double theta2);

struct OsgoodReport {
  std::vector<double> upper_limits;  ///< Z values
  std::vector<double> integrals;     ///< int_1^Z dx / b(x)
  bool positive = true;              ///< b > 0 on the sampled range
  bool diverging = true;
};

/// Trend of int_1^Z 1/b over Z = 10, 100, ..., 10^decades.
OsgoodReport osgood_diagnostic(const DriftSpec& drift, int decades = 12);

}  // namespace shelab
