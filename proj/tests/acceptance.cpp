#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "shelab/suite.hpp"
#include "shelab/verifier.hpp"

using namespace shelab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string summarize(const CheckReport& r) {
  std::string s = r.name + " stat=" + fmt("%.4g", r.statistic);
  if (r.coarse != r.fine) s += " (n_x: " + fmt("%.4g", r.coarse) + ", 2n_x: " + fmt("%.4g", r.fine) + ")";
  if (!r.note.empty()) s += " [" + r.note + "]";
  return s;
}

Outcome all_pass(const std::vector<CheckReport>& reports) {
  Outcome o{true, ""};
  for (const auto& r : reports) {
    o.pass = o.pass && r.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + summarize(r);
  }
  return o;
}

/// Largest relative error of semigroup_apply on sin(n pi x), n <= 8, against e^{-n^2 pi^2 t / 2}.
double eigen_decay_error(const KernelOptions& opts) {
  const KernelTable table(128, opts);
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n)
    for (double t : {0.01, 0.1, 1.0}) {
      SineCoefficients c{std::vector<double>(static_cast<size_t>(table.mode_count()), 0.0)};
      c.coefficients[static_cast<size_t>(n - 1)] = 1.0;
      const auto out = table.semigroup_apply(c, t);
      const double exact = std::exp(-n * n * M_PI * M_PI * t / 2);
      worst = std::max(worst, std::abs(out.mode(n) - exact) / exact);
      for (int m = 1; m <= table.mode_count(); ++m)
        if (m != n) worst = std::max(worst, std::abs(out.mode(m)) / exact);
    }
  return worst;
}

SuiteSettings desk_scale() {
  SuiteSettings s;
  s.mc.paths = 1000;
  s.isometry_paths = 10000;
  s.comparison_paths = 100;
  return s;
}

std::vector<CheckReport> lemmas(std::initializer_list<LemmaId> ids) { return verify_lemmas(ids); }

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const SuiteSettings desk = desk_scale();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

  criteria.emplace_back("kernel eigenfunction decay, rel err <= 1e-10", [] {
    const double e = eigen_decay_error({});
    return Outcome{e <= 1e-10, "max rel err " + fmt("%.3g", e)};
  });

  criteria.emplace_back("spectral vs image kernel, |diff| <= 1e-8 on 1000 samples", [] {
    const KernelTable table(128);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = std::pow(10.0, -4.0 + 4.0 * u(rng));
      const double x = u(rng), y = u(rng);
      worst = std::max(worst, std::abs(table.eval_spectral(t, x, y) - table.eval_image(t, x, y)));
    }
    return Outcome{worst <= 1e-8, "max |diff| " + fmt("%.3g", worst)};
  });

  criteria.emplace_back("kernel mass <= 1 and peak <= 1/sqrt(s), slack 1e-9",
                        [] { return all_pass(lemmas({LemmaId::kernel_mass_and_peak_bound})); });

  criteria.emplace_back("temporal L1 increment <= log(t/s), 1000 triples, tol 1e-6",
                        [] { return all_pass(lemmas({LemmaId::temporal_l1_log_bound})); });

  criteria.emplace_back("implied-constant lemmas finite and stable within 10%", [] {
    return all_pass(lemmas({LemmaId::spatial_l2_increment, LemmaId::spatial_l1_weighted_increment,
                            LemmaId::weighted_time_integral, LemmaId::weighted_time_integral_log,
                            LemmaId::temporal_l1_weighted_increment}));
  });

  criteria.emplace_back("Walsh isometry at 20 probes within 3 SE, 10^4 paths",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::isometry, desk)); });

  criteria.emplace_back("Picard difference-norm ratios <= 0.75 for n = 2..5",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::picard, desk)); });

  criteria.emplace_back("operator scaling: Lebesgue slope -1 +- 0.2, Walsh slope -alpha +- 0.15", [&] {
    auto r = run_stochastic_check(StochasticCheck::lebesgue, desk);
    for (auto& w : run_stochastic_check(StochasticCheck::walsh, desk)) r.push_back(std::move(w));
    return all_pass(r);
  });

  criteria.emplace_back("comparison violation fraction < 1e-3, 100 coupled paths",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::comparison, desk)); });

  criteria.emplace_back("stability slope 1 +- 0.2 over eps in {1e-1, 1e-2, 1e-3}",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::stability, desk)); });

  criteria.emplace_back("L2 continuity: median decreasing, noise exponent 0.25 +- 0.1",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::l2_continuity, desk)); });

  criteria.emplace_back("decay statistic finite, negative q^{2/3} tail slope",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::decay, desk)); });

  criteria.emplace_back("chaining inequality, k = 8, beta in {4, 16}",
                        [&] { return all_pass(run_stochastic_check(StochasticCheck::chaining, desk)); });

  criteria.emplace_back("coupled cutoffs N < N' agree to 1e-12 before T_N", [&] {
    const auto r = run_stochastic_check(StochasticCheck::uniqueness, desk);
    auto o = all_pass(r);
    const double stopped = r.front().diagnostic("stopped_fraction").value_or(0.0);
    o.pass = o.pass && stopped > 0.0;
    o.detail += ", stopped fraction " + fmt("%.2f", stopped);
    return o;
  });

  criteria.emplace_back("fault injection: lambda x2 fails 1 and 6, noise variance x1.1 fails 6", [&] {
    KernelOptions bad;
    bad.eigenvalue_scale = 2.0;
    const double e = eigen_decay_error(bad);
    SuiteSettings slow = desk;
    slow.kernel = bad;
    const auto iso_slow = run_stochastic_check(StochasticCheck::isometry, slow).front();
    SuiteSettings loud = desk;
    loud.noise_variance_scale = 1.1;
    const auto iso_loud = run_stochastic_check(StochasticCheck::isometry, loud).front();
    const bool c1_fails = !(e <= 1e-10);
    const bool ok = c1_fails && !iso_slow.pass && !iso_loud.pass;
    return Outcome{ok, "decay err " + fmt("%.3g", e) + ", isometry z (lambda x2) " + fmt("%.3g", iso_slow.statistic) +
                           ", isometry z (variance x1.1) " + fmt("%.3g", iso_loud.statistic)};
  });

  int passed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    passed += o.pass;
    std::printf("criterion %2zu %s  %s  (%.1f s)\n    %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
