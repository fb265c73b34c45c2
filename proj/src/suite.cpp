#include "shelab/suite.hpp"

#include <cmath>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

struct Named {
  StochasticCheck id;
  const char* name;
};

constexpr Named kNames[] = {
    {StochasticCheck::isometry, "isometry"},     {StochasticCheck::picard, "picard"},
    {StochasticCheck::lebesgue, "lebesgue"},     {StochasticCheck::walsh, "walsh"},
    {StochasticCheck::comparison, "comparison"}, {StochasticCheck::stability, "stability"},
    {StochasticCheck::l2_continuity, "l2-continuity"}, {StochasticCheck::decay, "decay"},
    {StochasticCheck::chaining, "chaining"},     {StochasticCheck::moment, "moment"},
    {StochasticCheck::uniqueness, "uniqueness"},
};

constexpr double kTheta1 = 0.5;
constexpr double kTheta2 = 1.0;
constexpr double kCutoffAlpha = 0.5;

double cutoff() { return std::exp(3.0); }

}  // namespace

const char* stochastic_check_name(StochasticCheck c) {
  for (const auto& n : kNames)
    if (n.id == c) return n.name;
  return "?";
}

StochasticCheck parse_stochastic_check(const std::string& name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.id;
  throw ConfigError("unknown stochastic check '" + name + "'");
}

std::vector<StochasticCheck> all_stochastic_checks() {
  std::vector<StochasticCheck> v;
  for (const auto& n : kNames) v.push_back(n.id);
  return v;
}

SolverConfig suite_base_config(const SuiteSettings& s) {
  SolverConfig c;
  c.grid_points = s.grid_points;
  c.steps = s.steps;
  c.horizon = s.horizon;
  c.master_seed = s.seed;
  c.kernel = s.kernel;
  c.noise_variance_scale = s.noise_variance_scale;
  c.drift = DriftSpec::llogl(kTheta1, kTheta2);
  c.truncation = Truncation{cutoff(), kCutoffAlpha};
  c.sigma = SigmaSpec::sine(1.0, 0.5);
  c.initial = InitialCondition::sine(1, 1.0);
  return c;
}

std::vector<CheckReport> run_stochastic_check(StochasticCheck check, const SuiteSettings& s) {
  const SolverConfig base = suite_base_config(s);
  MonteCarloOptions mc = s.mc;
  switch (check) {
    case StochasticCheck::isometry: {
      SolverConfig c = base;
      c.drift = DriftSpec::zero();
      c.truncation.reset();
      c.sigma = SigmaSpec::constant(1.0);
      c.initial = InitialCondition::zero();
      mc.paths = s.isometry_paths;
      return {check_isometry(c, default_probes(c), mc)};
    }
    case StochasticCheck::picard: {
      const double beta = 4.0 * s.C * resolve_envelope(base.drift, cutoff(), kCutoffAlpha, s.C).K_b;
      return {check_picard_contraction(base, 6, beta, 2.0, mc)};
    }
    case StochasticCheck::lebesgue:
      return {check_lebesgue_scaling(base, 0.25, {4, 8, 16, 32}, mc)};
    case StochasticCheck::walsh:
      return {check_walsh_scaling(base, 0.3, {4, 8, 16, 32}, mc), check_walsh_scaling(base, 0.5, {4, 8, 16, 32}, mc)};
    case StochasticCheck::comparison: {
      SolverConfig lo = base;
      lo.sigma = SigmaSpec::constant(1.0);
      lo.initial = InitialCondition::zero();
      SolverConfig hi = lo;
      hi.initial = InitialCondition::sine(1, 1.0);
      mc.paths = s.comparison_paths;
      return {check_comparison(lo, hi, mc, 1e-6)};
    }
    case StochasticCheck::stability:
      return {check_stability(base, InitialCondition::constant(1.0), {1e-1, 1e-2, 1e-3}, mc)};
    case StochasticCheck::l2_continuity: {
      SolverConfig c = base;
      c.initial = InitialCondition::indicator(0.25, 0.75, 1.0);
      return {check_l2_continuity(c, mc)};
    }
    case StochasticCheck::decay: {
      SolverConfig c = base;
      c.truncation.reset();
      c.initial = InitialCondition::singular(1.0);
      c.horizon = default_t0(s.A, kTheta2);
      const std::vector<double> N{std::exp(2.0), std::exp(3.0), std::exp(4.0), std::exp(6.0)};
      return {check_decay_statistic(c, N, kCutoffAlpha, 0.3, c.horizon, mc)};
    }
    case StochasticCheck::chaining: {
      std::vector<CheckReport> out;
      for (double beta : {4.0, 16.0}) {
        ModulusSpec spec;
        spec.k = 8;
        spec.alpha = 0.25;
        spec.beta = beta;
        spec.tau = spec.mu = 0.5 * (1 - 1e-3);
        out.push_back(check_chaining(base, spec, 0.35, mc));
      }
      return out;
    }
    case StochasticCheck::moment:
      return {check_moment_bound(base, resolve_envelope(base.drift, cutoff(), kCutoffAlpha, s.C), {2, 4, 8}, mc)};
    case StochasticCheck::uniqueness: {
      SolverConfig c = base;
      c.truncation.reset();
      c.drift = DriftSpec::llogl(10.0, 2.0);
      c.initial = InitialCondition::sine(1, 10.0);
      return {check_uniqueness(c, std::exp(2.0), std::exp(4.0), kCutoffAlpha, mc)};
    }
  }
  throw ConfigError("unhandled stochastic check");
}

}  // namespace shelab
