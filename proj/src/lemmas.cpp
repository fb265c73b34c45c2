#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "shelab/coefficients.hpp"
#include "shelab/errors.hpp"
#include "shelab/parallel.hpp"
#include "shelab/stats.hpp"
#include "shelab/verifier.hpp"

namespace shelab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kScales[] = {0.5, 1.0, 2.0, 4.0, 8.0};
/// Below this kernel width the y-integrals use the separated-bump limit.
constexpr double kNarrow = 1e-8;

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  return v;
}

const KernelTable& shared_table() {
  static const KernelTable table(128);
  return table;
}

/// Nodes of the outer s-integral over (0, t) with a precomputed inner factor at r = t - s.
struct Profile {
  double t = 0.0;
  std::vector<double> log_ratio;  ///< log(t/s)
  std::vector<double> log_log;    ///< log log_+(1/s)
  std::vector<double> r;
  std::vector<double> weighted_inner;  ///< quadrature weight times the inner factor
};

template <class Inner>
Profile make_profile(double t, int level, Inner&& inner) {
  Profile p;
  p.t = t;
  double last_r = -1.0, last_value = 0.0;
  for (const auto& n : tanh_sinh_nodes(0.0, t, level)) {
    const double s = n.from_lower, r = n.from_upper;
    if (r != last_r) {
      last_value = inner(r);
      last_r = r;
    }
    p.log_ratio.push_back(std::log(t / s));
    p.log_log.push_back(std::log(log_plus(1.0 / s)));
    p.r.push_back(r);
    p.weighted_inner.push_back(n.weight * last_value);
  }
  return p;
}

/// t^alpha e^{-beta t} int_0^t s^{-alpha} log_+(1/s)^chi e^{beta s} inner(t - s) ds
double weighted_sum(const Profile& p, double alpha, double chi, double beta) {
  double s = 0.0;
  for (size_t i = 0; i < p.r.size(); ++i) {
    if (p.weighted_inner[i] == 0.0) continue;
    s += p.weighted_inner[i] * std::exp(alpha * p.log_ratio[i] + chi * p.log_log[i] - beta * p.r[i]);
  }
  return s;
}

struct Sweep {
  std::vector<std::vector<double>> params;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<char> in_range;

  void add(std::vector<double> row, double l, double r, bool inside = true) {
    params.push_back(std::move(row));
    lhs.push_back(l);
    rhs.push_back(r);
    in_range.push_back(inside ? 1 : 0);
  }
  double ratio(size_t i) const { return lhs[i] == 0.0 ? 0.0 : lhs[i] / rhs[i]; }
  double sup(bool inside) const {
    double m = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i)
      if (static_cast<bool>(in_range[i]) == inside) m = std::max(m, std::isfinite(ratio(i)) ? ratio(i) : INFINITY);
    return m;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs a sweep at consecutive levels until the pointwise ratios settle, then reports the best
/// constant. With `absolute` the best constant must also stay below 1 + tolerance.
CheckReport level_report(const std::string& name, std::vector<std::string> columns,
                         const std::function<Sweep(int)>& sweep, const LemmaCheckSpec& spec, bool absolute) {
  const auto start = std::chrono::steady_clock::now();
  int level = spec.level;
  Sweep prev = sweep(level);
  Sweep cur = sweep(++level);
  double conv = INFINITY;
  for (;;) {
    const double sup = cur.sup(true);
    conv = 0.0;
    for (size_t i = 0; i < cur.lhs.size(); ++i)
      if (cur.in_range[i]) conv = std::max(conv, std::abs(cur.ratio(i) - prev.ratio(i)));
    conv = sup > 0.0 ? conv / sup : conv;
    if (conv <= spec.convergence || level >= spec.max_level) break;
    prev = std::move(cur);
    cur = sweep(++level);
  }

  CheckReport rep;
  rep.name = name;
  rep.coarse = prev.sup(true);
  rep.fine = cur.sup(true);
  rep.statistic = rep.fine;
  rep.bound = absolute ? 1.0 + spec.tolerance : CheckReport::kNaN;
  const bool converged = conv <= spec.convergence;
  const bool stable = rep.refinement_change() < spec.stability;
  const bool finite = std::isfinite(rep.fine);
  rep.inconclusive = !converged || !finite;
  rep.pass = converged && stable && finite && (!absolute || (rep.fine <= rep.bound && rep.coarse <= rep.bound));
  rep.diagnostics.emplace_back("level", level);
  rep.diagnostics.emplace_back("convergence", conv);
  rep.diagnostics.emplace_back("points", static_cast<double>(cur.lhs.size()));
  if (std::find(cur.in_range.begin(), cur.in_range.end(), 0) != cur.in_range.end()) {
    rep.diagnostics.emplace_back("extension_sup_ratio", cur.sup(false));
    rep.diagnostics.emplace_back("extension_sup_ratio_coarse", prev.sup(false));
  }
  if (!converged) rep.note = "quadrature did not settle by level " + std::to_string(level);
  columns.insert(columns.end(), {"lhs", "rhs", "ratio_coarse", "ratio_fine", "in_range"});
  rep.detail.columns = std::move(columns);
  for (size_t i = 0; i < cur.lhs.size(); ++i) {
    auto row = cur.params[i];
    row.insert(row.end(), {cur.lhs[i], cur.rhs[i], prev.ratio(i), cur.ratio(i), static_cast<double>(cur.in_range[i])});
    rep.detail.rows.push_back(std::move(row));
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

template <class Fn>
Sweep gather(int items, int workers, Fn&& fn) {
  auto parts = parallel_map<Sweep>(items, workers, fn);
  Sweep all;
  for (auto& p : parts)
    for (size_t i = 0; i < p.lhs.size(); ++i) all.add(std::move(p.params[i]), p.lhs[i], p.rhs[i], p.in_range[i]);
  return all;
}

CheckReport kernel_bound(const LemmaCheckSpec& spec) {
  auto sweep = [&](int level) {
    KernelOptions opt;
    opt.series_tolerance = std::pow(10.0, -(level + 7));
    const KernelTable table(128, opt);
    const int n_s = static_cast<int>(spec.t_values.size());
    return gather(n_s, spec.workers, [&](int i) {
      Sweep sw;
      const double s = spec.t_values[static_cast<size_t>(i)];
      for (double x : spec.x_values) {
        sw.add({s, x, CheckReport::kNaN, 0.0}, table.mass(s, x), 1.0);
        for (double z : spec.x_values) {
          const double g = std::max(table.eval_spectral(s, x, z), table.eval_image(s, x, z));
          sw.add({s, x, z, 1.0}, g * std::sqrt(s), 1.0);
        }
      }
      return sw;
    });
  };
  auto rep = level_report(lemma_name(spec.id), {"s", "x", "z", "kind"}, sweep, spec, true);
  // Non-negativity of both representations before clamping.
  double worst = 0.0;
  const KernelTable table(128);
  for (double s : spec.t_values)
    for (double x : spec.x_values)
      for (double z : spec.x_values)
        worst = std::min({worst, table.eval_spectral(s, x, z), table.eval_image(s, x, z)});
  rep.diagnostics.emplace_back("min_kernel_value", worst);
  if (worst < -spec.tolerance) rep.pass = false;
  return rep;
}

CheckReport spatial_l2(const LemmaCheckSpec& spec) {
  const auto& table = shared_table();
  auto sweep = [&](int level) {
    return gather(static_cast<int>(spec.pairs.size()), spec.workers, [&](int i) {
      Sweep sw;
      const auto [x, z] = spec.pairs[static_cast<size_t>(i)];
      sw.add({x, z}, spatial_l2_increment(table, x, z, level), std::abs(x - z));
      return sw;
    });
  };
  return level_report(lemma_name(spec.id), {"x", "z"}, sweep, spec, false);
}

CheckReport spatial_l1(const LemmaCheckSpec& spec) {
  const auto& table = shared_table();
  const int n_t = static_cast<int>(spec.t_values.size());
  const int items = static_cast<int>(spec.pairs.size()) * n_t;
  auto sweep = [&](int level) {
    const GaussLegendre rule(inner_order(level));
    return gather(items, spec.workers, [&](int i) {
      Sweep sw;
      const auto [x, z] = spec.pairs[static_cast<size_t>(i / n_t)];
      const double t = spec.t_values[static_cast<size_t>(i % n_t)];
      const auto prof = make_profile(t, level, [&](double r) { return spatial_l1_difference(table, r, x, z, rule); });
      const double d = std::abs(x - z);
      for (double alpha : spec.alpha_values)
        for (double chi : spec.chi_values)
          for (double beta : spec.beta_values) {
            const double lhs = weighted_sum(prof, alpha, chi, beta);
            for (double delta : spec.delta_values) {
              const bool inside = !(delta == 0.0 && chi > 0.0);
              if (!inside && !spec.range_extension) continue;
              sw.add({x, z, t, alpha, chi, beta, delta}, lhs, std::pow(d, delta) / std::pow(beta, 1.0 - delta), inside);
            }
          }
      return sw;
    });
  };
  return level_report(lemma_name(spec.id), {"x", "z", "t", "alpha", "chi", "beta", "delta"}, sweep, spec, false);
}

CheckReport time_integral(const LemmaCheckSpec& spec, bool log_form) {
  auto sweep = [&](int level) {
    return gather(static_cast<int>(spec.t_values.size()), spec.workers, [&](int i) {
      Sweep sw;
      const double t = spec.t_values[static_cast<size_t>(i)];
      const auto prof = make_profile(t, level, [](double) { return 1.0; });
      for (double alpha : spec.alpha_values)
        for (double chi : spec.chi_values)
          for (double beta : spec.beta_values) {
            const double lhs = weighted_sum(prof, alpha, chi, beta);
            if (log_form) {
              sw.add({t, alpha, chi, beta}, lhs, std::pow(std::log(beta), chi) / beta);
              continue;
            }
            for (double delta : spec.delta_values) {
              const bool inside = delta > 0.0 || chi == 0.0;
              if (!inside && !spec.range_extension) continue;
              sw.add({t, alpha, chi, beta, delta}, lhs, std::pow(beta, -(1.0 - delta)), inside);
            }
          }
      return sw;
    });
  };
  if (log_form) return level_report(lemma_name(spec.id), {"t", "alpha", "chi", "beta"}, sweep, spec, false);
  return level_report(lemma_name(spec.id), {"t", "alpha", "chi", "beta", "delta"}, sweep, spec, false);
}

CheckReport temporal_log(const LemmaCheckSpec& spec) {
  const auto& table = shared_table();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Triple {
    double s, t, x;
  };
  std::vector<Triple> triples;
  for (int i = 0; i < spec.random_samples; ++i) {
    const double s = std::exp(std::log(1e-4) * u(rng));
    const double ratio = std::exp(std::log(100.0) * (1.0 - u(rng)));  // in (1, 100]
    triples.push_back({s, s * ratio, u(rng)});
  }
  auto sweep = [&](int level) {
    const GaussLegendre rule(inner_order(level));
    return gather(static_cast<int>(triples.size()), spec.workers, [&](int i) {
      Sweep sw;
      const auto& tr = triples[static_cast<size_t>(i)];
      if (tr.t > tr.s)
        sw.add({tr.s, tr.t, tr.x}, temporal_l1_difference(table, tr.s, tr.t - tr.s, tr.x, rule), std::log(tr.t / tr.s));
      return sw;
    });
  };
  auto rep = level_report(lemma_name(spec.id), {"s", "t", "x"}, sweep, spec, true);
  // s = t: both sides vanish.
  const GaussLegendre rule(inner_order(spec.level));
  if (temporal_l1_difference(table, 0.3, 0.0, 0.4, rule) != 0.0) rep.pass = false;
  return rep;
}

CheckReport temporal_l1(const LemmaCheckSpec& spec) {
  const auto& table = shared_table();
  const size_t n_t = spec.t_values.size(), n_e = spec.eps_values.size();
  const int items = static_cast<int>(spec.x_values.size() * n_e * n_t);
  auto sweep = [&](int level) {
    const GaussLegendre rule(inner_order(level));
    return gather(items, spec.workers, [&](int i) {
      Sweep sw;
      const size_t k = static_cast<size_t>(i);
      const double x = spec.x_values[k / (n_e * n_t)];
      const double eps = spec.eps_values[(k / n_t) % n_e];
      const double t = spec.t_values[k % n_t];
      const auto prof = make_profile(t, level, [&](double r) { return temporal_l1_difference(table, r, eps, x, rule); });
      for (double theta : spec.alpha_values)
        for (double beta : spec.beta_values) {
          const double lhs = weighted_sum(prof, theta, 0.0, beta);
          for (double delta : spec.delta_values)
            for (double f : spec.eta_fractions) {
              const double eta = delta + f * (1.0 - delta);
              sw.add({x, eps, t, theta, beta, delta, eta}, lhs, std::pow(eps, delta) / std::pow(beta, 1.0 - eta));
            }
        }
      return sw;
    });
  };
  return level_report(lemma_name(spec.id), {"x", "eps", "t", "theta", "beta", "delta", "eta"}, sweep, spec, false);
}

}  // namespace

double CheckReport::refinement_change() const {
  if (fine == coarse) return 0.0;
  return std::abs(fine - coarse) / std::abs(fine);
}

std::optional<double> CheckReport::diagnostic(const std::string& key) const {
  for (const auto& [k, v] : diagnostics)
    if (k == key) return v;
  return std::nullopt;
}

const char* lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::kernel_mass_and_peak_bound: return "kernel_mass_and_peak_bound";
    case LemmaId::spatial_l2_increment: return "spatial_l2_increment";
    case LemmaId::spatial_l1_weighted_increment: return "spatial_l1_weighted_increment";
    case LemmaId::weighted_time_integral: return "weighted_time_integral";
    case LemmaId::weighted_time_integral_log: return "weighted_time_integral_log";
    case LemmaId::temporal_l1_log_bound: return "temporal_l1_log_bound";
    case LemmaId::temporal_l1_weighted_increment: return "temporal_l1_weighted_increment";
  }
  return "";
}

std::vector<LemmaId> all_lemmas() {
  return {LemmaId::kernel_mass_and_peak_bound, LemmaId::spatial_l2_increment,
          LemmaId::spatial_l1_weighted_increment, LemmaId::weighted_time_integral,
          LemmaId::weighted_time_integral_log, LemmaId::temporal_l1_log_bound,
          LemmaId::temporal_l1_weighted_increment};
}

LemmaId parse_lemma(const std::string& name) {
  for (auto id : all_lemmas())
    if (name == lemma_name(id)) return id;
  throw ConfigError("unknown lemma check '" + name + "'");
}

LemmaCheckSpec LemmaCheckSpec::defaults(LemmaId id) {
  LemmaCheckSpec s;
  s.id = id;
  switch (id) {
    case LemmaId::kernel_mass_and_peak_bound:
      s.t_values = logspace(1e-6, 10.0, 29);
      for (int i = 0; i <= 32; ++i) s.x_values.push_back(i / 32.0);
      s.tolerance = 1e-9;
      break;
    case LemmaId::spatial_l2_increment: {
      std::mt19937_64 rng(s.seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      while (s.pairs.size() < 50) {
        const double x = u(rng), z = u(rng);
        if (std::abs(x - z) >= 1e-3) s.pairs.emplace_back(x, z);
      }
      break;
    }
    case LemmaId::spatial_l1_weighted_increment:
      s.alpha_values = {0.0, 0.3, 0.6, 0.9};
      s.delta_values = {0.0, 0.3, 0.6, 0.9};
      s.chi_values = {0.0, 1.0, 2.0};
      s.t_values = logspace(1e-4, 1.0, 9);
      s.beta_values = logspace(1e-1, 1e5, 13);
      for (double d : {1e-3, 1e-2, 1e-1, 0.5}) {
        s.pairs.emplace_back(0.5 - d / 2, 0.5 + d / 2);
        s.pairs.emplace_back(0.02, 0.02 + d);
      }
      s.pairs.emplace_back(0.05, 0.1);
      s.pairs.emplace_back(0.0, 1.0);
      break;
    case LemmaId::weighted_time_integral:
      s.alpha_values = {0.1, 0.5, 0.9};
      s.delta_values = {0.0, 0.1, 0.5, 0.9};
      s.chi_values = {0.0, 0.5, 1.0};
      s.t_values = logspace(1e-8, 1.0, 17);
      s.beta_values = logspace(1e-2, 1e8, 21);
      break;
    case LemmaId::weighted_time_integral_log:
      s.alpha_values = {0.1, 0.5, 0.9};
      s.chi_values = {0.0, 1.0, 2.0, 4.0};
      s.t_values = logspace(1e-6, 100.0, 17);
      s.beta_values = logspace(std::exp(1.0), 1e8, 15);
      break;
    case LemmaId::temporal_l1_log_bound:
      s.random_samples = 1000;
      s.tolerance = 1e-6;
      break;
    case LemmaId::temporal_l1_weighted_increment:
      s.alpha_values = {0.1, 0.5, 0.9};
      s.delta_values = {0.1, 0.5, 0.9};
      s.eta_fractions = {0.5, 0.9};
      s.eps_values = {1e-4, 1e-3, 1e-2, 0.1, 0.5, 0.9};
      s.x_values = {0.5, 0.1, 0.01};
      s.t_values = logspace(1e-4, 1.0, 9);
      s.beta_values = logspace(1e-1, 1e5, 13);
      break;
  }
  return s;
}

void LemmaCheckSpec::validate() const {
  auto in = [](const std::vector<double>& v, double lo, double hi, bool open_lo, bool open_hi) {
    for (double a : v)
      if ((open_lo ? a <= lo : a < lo) || (open_hi ? a >= hi : a > hi)) return false;
    return true;
  };
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("lemma grid out of range: ") + what);
  };
  need(level >= 1 && max_level > level && max_level <= 12, "levels");
  for (auto [x, z] : pairs) need(x >= 0 && x <= 1 && z >= 0 && z <= 1, "positions in [0,1]");
  need(in(x_values, 0, 1, false, false), "positions in [0,1]");
  switch (id) {
    case LemmaId::kernel_mass_and_peak_bound: need(in(t_values, 0, INFINITY, true, true), "s > 0"); break;
    case LemmaId::spatial_l2_increment: break;
    case LemmaId::spatial_l1_weighted_increment:
      need(in(alpha_values, 0, 1, false, true), "alpha in [0,1)");
      need(in(delta_values, 0, 1, false, true), "delta in [0,1)");
      need(in(chi_values, 0, INFINITY, false, true), "chi >= 0");
      need(in(t_values, 0, 1, true, false), "t in (0,1]");
      need(in(beta_values, 0, INFINITY, true, true), "beta > 0");
      break;
    case LemmaId::weighted_time_integral:
      need(in(alpha_values, 0, 1, true, true), "alpha in (0,1)");
      need(in(delta_values, 0, 1, false, true), "delta in (0,1), or 0 with chi = 0");
      need(in(chi_values, 0, 1, false, false), "chi in [0,1]");
      need(in(t_values, 0, 1, true, false), "t in (0,1]");
      need(in(beta_values, 0, INFINITY, true, true), "beta > 0");
      break;
    case LemmaId::weighted_time_integral_log:
      need(in(alpha_values, 0, 1, true, true), "alpha in (0,1)");
      need(in(chi_values, 0, INFINITY, false, true), "chi >= 0");
      need(in(t_values, 0, INFINITY, true, true), "t > 0");
      need(in(beta_values, std::exp(1.0) * (1 - 1e-15), INFINITY, false, true), "beta >= e");
      break;
    case LemmaId::temporal_l1_log_bound: need(random_samples >= 1, "sample count"); break;
    case LemmaId::temporal_l1_weighted_increment:
      need(in(alpha_values, 0, 1, true, true), "theta in (0,1)");
      need(in(delta_values, 0, 1, true, true), "delta in (0,1)");
      need(in(eta_fractions, 0, 1, true, true), "eta in (delta,1)");
      need(in(eps_values, 0, 1, true, true), "eps in (0,1)");
      need(in(t_values, 0, 1, true, false), "t in (0,1]");
      need(in(beta_values, 0, INFINITY, true, true), "beta > 0");
      break;
  }
}

int inner_order(int level) { return std::max(8, 4 * level - 4); }

double spatial_l1_difference(const KernelTable& table, double r, double x, double z, const GaussLegendre& rule) {
  if (x == z) return 0.0;
  const double w = std::sqrt(r);
  if (w < kNarrow) return table.mass(r, x) + table.mass(r, z);
  std::vector<double> cuts;
  for (double c : kScales)
    for (double p : {x, z}) {
      cuts.push_back(p - c * w);
      cuts.push_back(p + c * w);
    }
  return integrate_abs([&](double y) { return table.eval(r, x, y) - table.eval(r, z, y); }, 0.0, 1.0, cuts, rule);
}

double temporal_l1_difference(const KernelTable& table, double r, double eps, double x, const GaussLegendre& rule) {
  if (eps == 0.0) return 0.0;
  const double w = std::sqrt(r), we = std::sqrt(r + eps);
  if (w < kNarrow) return table.mass(r + eps, x) + table.mass(r, x);
  std::vector<double> cuts;
  for (double c : kScales)
    for (double s : {w, we}) {
      cuts.push_back(x - c * s);
      cuts.push_back(x + c * s);
    }
  return integrate_abs([&](double y) { return table.eval(r + eps, x, y) - table.eval(r, x, y); }, 0.0, 1.0, cuts, rule);
}

double spatial_l2_increment(const KernelTable& table, double x, double z, int level) {
  constexpr double T = 5.0;
  auto inner = [&](double s) {
    const double u = 2.0 * s;
    if (u >= table.switch_time()) {
      // sum_n 2 e^{-n^2 pi^2 s} (sin n pi x - sin n pi z)^2, free of cancellation
      double acc = 0.0;
      for (int n = 1; n < 200; ++n) {
        const double e = std::exp(-n * n * kPi * kPi * s);
        const double d = std::sin(n * kPi * x) - std::sin(n * kPi * z);
        acc += 2.0 * e * d * d;
        if (e < 1e-18) break;
      }
      return acc;
    }
    return table.eval_image(u, x, x) + table.eval_image(u, z, z) - 2.0 * table.eval_image(u, x, z);
  };
  double total = tanh_sinh_integrate([&](double s, double) { return inner(s); }, 0.0, T, level);
  // Tail beyond T: the n = 1 term integrated exactly; higher modes are below 1e-40.
  const double d1 = std::sin(kPi * x) - std::sin(kPi * z);
  total += 2.0 * d1 * d1 * std::exp(-kPi * kPi * T) / (kPi * kPi);
  return total;
}

double weighted_time_integral(double t, double alpha, double chi, double beta, int level) {
  return weighted_sum(make_profile(t, level, [](double) { return 1.0; }), alpha, chi, beta);
}

double spatial_l1_weighted_increment(const KernelTable& table, double t, double x, double z, double alpha, double chi,
                                     double beta, int level) {
  const GaussLegendre rule(inner_order(level));
  const auto prof = make_profile(t, level, [&](double r) { return spatial_l1_difference(table, r, x, z, rule); });
  return weighted_sum(prof, alpha, chi, beta);
}

double temporal_l1_weighted_increment(const KernelTable& table, double t, double eps, double x, double theta,
                                      double beta, int level) {
  const GaussLegendre rule(inner_order(level));
  const auto prof = make_profile(t, level, [&](double r) { return temporal_l1_difference(table, r, eps, x, rule); });
  return weighted_sum(prof, theta, 0.0, beta);
}

CheckReport check_kernel_lemma(const LemmaCheckSpec& spec) {
  spec.validate();
  switch (spec.id) {
    case LemmaId::kernel_mass_and_peak_bound: return kernel_bound(spec);
    case LemmaId::spatial_l2_increment: return spatial_l2(spec);
    case LemmaId::spatial_l1_weighted_increment: return spatial_l1(spec);
    case LemmaId::weighted_time_integral: return time_integral(spec, false);
    case LemmaId::weighted_time_integral_log: return time_integral(spec, true);
    case LemmaId::temporal_l1_log_bound: return temporal_log(spec);
    case LemmaId::temporal_l1_weighted_increment: return temporal_l1(spec);
  }
  throw DomainError("unknown lemma");
}

std::vector<CheckReport> verify_lemmas(const std::vector<LemmaId>& ids, int workers) {
  std::vector<CheckReport> out;
  for (auto id : ids) {
    auto spec = LemmaCheckSpec::defaults(id);
    spec.workers = resolve_workers(workers);
    out.push_back(check_kernel_lemma(spec));
  }
  return out;
}

}  // namespace shelab
