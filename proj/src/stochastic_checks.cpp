#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "shelab/errors.hpp"
#include "shelab/parallel.hpp"
#include "shelab/stats.hpp"
#include "shelab/verifier.hpp"

namespace shelab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = CheckReport::kNaN;
constexpr int kChunk = 8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Result of one check at one spatial resolution.
struct LevelOutcome {
  double statistic = kNaN;
  bool pass = false;
  double stderr_ = kNaN;
  std::vector<std::pair<std::string, double>> diagnostics;
  DetailTable detail;
  std::string note;
};

SolverConfig refined_config(const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.grid_points = 2 * cfg.grid_points;
  return c;
}

/// Runs `level` at n_x and, when requested, at 2 n_x; the check passes only if both levels pass and
/// the statistic moves by less than the stability margin.
template <class Level>
CheckReport refined(const std::string& name, double bound, const SolverConfig& cfg, const MonteCarloOptions& mc,
                    bool sup_based, Level&& level) {
  const auto start = Clock::now();
  CheckReport rep;
  rep.name = name;
  rep.bound = bound;
  LevelOutcome a = level(cfg);
  std::optional<LevelOutcome> b;
  if (sup_based && mc.refine) b = level(refined_config(cfg));
  rep.coarse = a.statistic;
  rep.fine = b ? b->statistic : a.statistic;
  rep.statistic = rep.fine;
  rep.stderr_ = b ? b->stderr_ : a.stderr_;
  const bool finite = std::isfinite(rep.fine) && std::isfinite(rep.coarse);
  rep.inconclusive = !finite;
  // One-sided bounds compare the grid change against the bound itself, so a statistic far below
  // its bound is not held to a relative tolerance on a tiny number.
  const double scale = std::max(std::abs(rep.fine), std::isfinite(bound) ? std::abs(bound) : 0.0);
  const double change = b ? std::abs(rep.fine - rep.coarse) / scale : 0.0;
  rep.pass = finite && a.pass && (!b || (b->pass && change < mc.stability));
  if (b) rep.diagnostics.emplace_back("grid_change", change);
  rep.note = b && !b->note.empty() ? b->note : a.note;
  auto add_level = [&](const LevelOutcome& o, int nx) {
    for (const auto& [k, v] : o.diagnostics) rep.diagnostics.emplace_back(k + "@" + std::to_string(nx), v);
    if (rep.detail.columns.empty() && !o.detail.columns.empty()) {
      rep.detail.columns = {"n_x"};
      rep.detail.columns.insert(rep.detail.columns.end(), o.detail.columns.begin(), o.detail.columns.end());
    }
    for (const auto& row : o.detail.rows) {
      std::vector<double> r{static_cast<double>(nx)};
      r.insert(r.end(), row.begin(), row.end());
      rep.detail.rows.push_back(std::move(r));
    }
  };
  add_level(a, cfg.grid_points);
  if (b) add_level(*b, 2 * cfg.grid_points);
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

std::vector<double> grid_times(int steps, double horizon) {
  std::vector<double> t(static_cast<size_t>(steps));
  for (int r = 0; r < steps; ++r) t[static_cast<size_t>(r)] = (r + 1) * horizon / steps;
  return t;
}

/// Trajectory holding X = 1 everywhere, including t = 0.
Trajectory ones_like(const Solver& s) {
  Trajectory t = s.blank(0);
  std::fill(t.initial.begin(), t.initial.end(), 1.0);
  std::fill(t.values.begin(), t.values.end(), 1.0);
  return t;
}

SolverConfig additive_config(const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.drift = DriftSpec::zero();
  c.truncation.reset();
  c.sigma = SigmaSpec::constant(1.0);
  c.initial = InitialCondition::zero();
  c.perturbation_scale = 0.0;
  return c;
}

struct Moments4 {
  std::vector<double> s1, s2, s3, s4;
  long n = 0;
  explicit Moments4(size_t k = 0) : s1(k), s2(k), s3(k), s4(k) {}
  void add(size_t i, double x) {
    s1[i] += x;
    s2[i] += x * x;
    s3[i] += x * x * x;
    s4[i] += x * x * x * x;
  }
  void merge(const Moments4& o) {
    for (size_t i = 0; i < s1.size(); ++i) {
      s1[i] += o.s1[i];
      s2[i] += o.s2[i];
      s3[i] += o.s3[i];
      s4[i] += o.s4[i];
    }
    n += o.n;
  }
  /// Unbiased variance and its standard error from the fourth central moment.
  std::pair<double, double> variance(size_t i) const {
    const double N = static_cast<double>(n);
    const double m = s1[i] / N;
    const double e2 = s2[i] / N, e3 = s3[i] / N, e4 = s4[i] / N;
    const double c2 = e2 - m * m;
    const double c4 = e4 - 4 * m * e3 + 6 * m * m * e2 - 3 * m * m * m * m;
    const double var = c2 * N / (N - 1);
    const double se = std::sqrt(std::max(0.0, (c4 - var * var * (N - 3) / (N - 1)) / N));
    return {var, se};
  }
};

/// Per-path L2 curves on dyadic times T 2^{-k} >= dt.
struct L2Curves {
  std::vector<int> rows;
  std::vector<std::vector<double>> distance;  ///< [time][path] ||u(t) - u0||
  std::vector<std::vector<double>> noise_sq;  ///< [time][path] ||J(t)||^2
  void merge(const L2Curves& o) {
    if (rows.empty()) rows = o.rows;
    distance.resize(o.distance.size());
    noise_sq.resize(o.noise_sq.size());
    for (size_t i = 0; i < o.distance.size(); ++i) {
      distance[i].insert(distance[i].end(), o.distance[i].begin(), o.distance[i].end());
      noise_sq[i].insert(noise_sq[i].end(), o.noise_sq[i].begin(), o.noise_sq[i].end());
    }
  }
};

std::vector<int> dyadic_rows(int steps, double horizon) {
  std::vector<int> rows;
  const double dt = horizon / steps;
  for (double t = horizon; t >= dt * (1 - 1e-9); t *= 0.5) {
    const int r = static_cast<int>(std::lround(t / dt)) - 1;
    if (r < 0 || std::abs((r + 1) * dt - t) > 1e-9 * t) break;
    rows.push_back(r);
  }
  return rows;
}

double l2_distance(std::span<const double> a, std::span<const double> b, double dx) {
  double s = 0.0;
  for (size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s * dx);
}

LevelOutcome l2_outcome(const L2Curves& c, double dt) {
  LevelOutcome o;
  o.detail.columns = {"t", "median_distance", "mean_noise_sq", "median_noise_norm"};
  std::vector<double> ts, med, ej2, mj;
  for (size_t i = 0; i < c.rows.size(); ++i) {
    const double t = (c.rows[i] + 1) * dt;
    ts.push_back(t);
    med.push_back(median(c.distance[i]));
    ej2.push_back(mean(c.noise_sq[i]));
    std::vector<double> norms;
    for (double v : c.noise_sq[i]) norms.push_back(std::sqrt(v));
    mj.push_back(median(norms));
    o.detail.rows.push_back({t, med.back(), ej2.back(), mj.back()});
  }
  // rows run from T down to dt; "eventually decreasing" over the smallest four or more times
  const size_t n = ts.size();
  size_t run = 1;
  while (run < n && med[n - run] < med[n - run - 1]) ++run;
  const double largest = *std::max_element(med.begin(), med.end());
  const bool decreasing = run >= 4 && med.back() < 0.5 * largest;
  // Noise exponents over the small-time dyadic points (t <= T/8).
  std::vector<double> ft, fj2, fj;
  for (size_t i = 0; i < n; ++i)
    if (ts[i] <= ts.front() / 8 * (1 + 1e-12)) {
      ft.push_back(ts[i]);
      fj2.push_back(ej2[i]);
      fj.push_back(mj[i]);
    }
  if (std::any_of(fj2.begin(), fj2.end(), [](double v) { return !(v > 0.0); })) {
    o.note = "noise part vanishes";
    return o;
  }
  if (ft.size() < 4) {
    o.note = "fewer than four dyadic times below T/8";
    return o;
  }
  const auto sq = log_log_fit(ft, fj2);
  const auto nm = log_log_fit(ft, fj);
  o.statistic = nm.slope;
  o.stderr_ = nm.slope_stderr;
  o.diagnostics = {{"decreasing_run", static_cast<double>(run)},
                   {"final_over_largest", med.back() / largest},
                   {"noise_sq_slope", sq.slope},
                   {"noise_norm_slope", nm.slope}};
  o.pass = decreasing && std::abs(sq.slope - 0.5) <= 0.1 && std::abs(nm.slope - 0.25) <= 0.1;
  if (!decreasing) o.note = "median distance not eventually decreasing";
  return o;
}

struct DecayAcc {
  std::vector<double> S;
  std::vector<std::vector<double>> early;  ///< [row][path] t^alpha max|u| at the first rows
  int blown = 0, exhausted = 0;
  void merge(const DecayAcc& o) {
    S.insert(S.end(), o.S.begin(), o.S.end());
    early.resize(std::max(early.size(), o.early.size()));
    for (size_t r = 0; r < o.early.size(); ++r) early[r].insert(early[r].end(), o.early[r].begin(), o.early[r].end());
    blown += o.blown;
    exhausted += o.exhausted;
  }
  void add(const Trajectory& tr, double alpha, double t0, int early_rows) {
    if (tr.blown_up()) {
      ++blown;
      return;
    }
    double s = 0.0;
    early.resize(static_cast<size_t>(early_rows));
    for (int r = 0; r < tr.steps; ++r) {
      const double t = tr.time(r);
      if (t > t0 * (1 + 1e-12)) break;
      double m = 0.0;
      bool valid = true;
      for (double v : tr.row(r)) {
        if (!std::isfinite(v)) {
          valid = false;
          break;
        }
        m = std::max(m, std::abs(v));
      }
      if (!valid) break;  // after the stop marker of an exhausted patched run
      const double w = std::pow(t, alpha) * m;
      s = std::max(s, w);
      if (r < early_rows) early[static_cast<size_t>(r)].push_back(w);
    }
    S.push_back(s);
  }
};

LevelOutcome decay_outcome(const DecayAcc& acc) {
  LevelOutcome o;
  const bool finite = std::all_of(acc.S.begin(), acc.S.end(), [](double v) { return std::isfinite(v); });
  std::vector<double> q, logp;
  o.detail.columns = {"q", "q_two_thirds", "tail_probability"};
  const double n = static_cast<double>(acc.S.size());
  for (double p : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99}) {
    const double qp = quantile(acc.S, p);
    const double tail = static_cast<double>(std::count_if(acc.S.begin(), acc.S.end(), [&](double v) { return v > qp; })) / n;
    if (tail <= 0.0 || (!q.empty() && qp <= q.back())) continue;
    q.push_back(qp);
    logp.push_back(std::log(tail));
    o.detail.rows.push_back({qp, std::pow(qp, 2.0 / 3.0), tail});
  }
  double slope = kNaN;
  if (q.size() >= 4) {
    std::vector<double> q23;
    for (double v : q) q23.push_back(std::pow(v, 2.0 / 3.0));
    slope = least_squares(q23, logp).slope;
  }
  std::vector<double> med;
  for (const auto& e : acc.early) med.push_back(e.empty() ? kNaN : median(e));
  bool early_decreasing = med.size() >= 2;
  for (size_t r = 1; r < med.size(); ++r) early_decreasing = early_decreasing && med[r - 1] < med[r];
  o.statistic = median(acc.S);
  o.diagnostics = {{"tail_slope", slope},
                   {"blowup_paths", static_cast<double>(acc.blown)},
                   {"exhausted_paths", static_cast<double>(acc.exhausted)},
                   {"finite_fraction", finite ? 1.0 : 0.0},
                   {"early_decreasing", early_decreasing ? 1.0 : 0.0}};
  for (size_t r = 0; r < med.size(); ++r) o.diagnostics.emplace_back("early_median_" + std::to_string(r), med[r]);
  o.pass = finite && !acc.S.empty() && std::isfinite(slope) && slope < 0.0 && early_decreasing;
  if (!(std::isfinite(slope) && slope < 0.0)) o.note = "tail slope not negative";
  return o;
}

struct ChainAcc {
  double lhs_sum = 0.0;
  long n = 0;
  MomentField field;
  PairMoments pairs;
  void merge(const ChainAcc& o) {
    lhs_sum += o.lhs_sum;
    n += o.n;
    field.merge(o.field);
    pairs.merge(o.pairs);
  }
};

LevelOutcome chaining_outcome(const ChainAcc& acc, const ModulusSpec& spec, double alpha_bar, int steps,
                              double horizon) {
  LevelOutcome o;
  const double k = spec.k;
  const auto times = grid_times(steps, horizon);
  const double lhs = acc.lhs_sum / static_cast<double>(acc.n);
  const double N = weighted_moment_sup(acc.field, 0, times, spec.alpha, spec.beta, horizon).value;
  const double C = holder_statistic(acc.pairs, spec, steps, acc.field.cols(), horizon);
  const double L = chaining_constant(spec.alpha, alpha_bar);
  // compare k-th roots: LHS^{1/k} <= 1280 L (N + C)
  const double log_ratio = std::log(lhs) / k - std::log(1280.0 * L) - std::log(N + C);
  o.statistic = std::exp(log_ratio);
  o.pass = std::isfinite(log_ratio) && log_ratio <= 0.0;
  o.diagnostics = {{"lhs_root", std::pow(lhs, 1.0 / k)}, {"moment_norm", N}, {"holder_constant", C}, {"L", L},
                   {"log10_lhs", std::log10(lhs)}, {"log10_rhs", k * std::log10(1280.0 * L * (N + C))}};
  if (!std::isfinite(log_ratio)) o.note = "moment estimates not finite";
  return o;
}

ChainAcc chaining_prototype(int steps, int cells, double k) {
  ChainAcc a;
  a.field = MomentField(steps, cells, {k});
  a.pairs = PairMoments(holder_pairs(steps, cells), k);
  return a;
}

void chaining_add(ChainAcc& acc, const Trajectory& w, const ModulusSpec& spec, double alpha_bar) {
  const double sup = weighted_sup_norm(w, alpha_bar, 2.0 * spec.beta, w.horizon);
  acc.lhs_sum += std::pow(sup, spec.k);
  ++acc.n;
  acc.field.add(w.values);
  acc.pairs.add(w);
}

/// Smallest A with (k/4) log(2A/t) + k log(a + sqrt k) + 4 A K k t >= log m.
double minimal_A(double log_m, double t, double k, double a, double K) {
  auto f = [&](double A) { return 0.25 * k * std::log(2 * A / t) + k * std::log(a + std::sqrt(k)) + 4 * A * K * k * t; };
  double lo = 1e-300, hi = 1.0;
  if (f(lo) >= log_m) return 0.0;
  while (f(hi) < log_m) {
    hi *= 2;
    if (hi > 1e300) return INFINITY;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (f(mid) >= log_m ? hi : lo) = mid;
    if (hi / lo < 1 + 1e-12) break;
  }
  return hi;
}

LevelOutcome moment_outcome(const MomentField& field, const std::vector<double>& times, const Envelope& env,
                            double u0_norm, int blown, int total) {
  LevelOutcome o;
  double A = 0.0;
  o.detail.columns = {"k", "A_min"};
  for (int q = 0; q < static_cast<int>(field.orders().size()); ++q) {
    const double k = field.orders()[static_cast<size_t>(q)];
    double Ak = 0.0;
    for (int r = 0; r < field.rows(); ++r)
      for (int j = 0; j < field.cols(); ++j) {
        const double m = field.moment(q, static_cast<size_t>(r) * field.cols() + j);
        if (m <= 0.0) continue;
        Ak = std::max(Ak, minimal_A(std::log(m), times[static_cast<size_t>(r)], k, u0_norm, env.K_b));
      }
    o.detail.rows.push_back({k, Ak});
    A = std::max(A, Ak);
  }
  o.statistic = A;
  o.diagnostics = {{"blowup_fraction", static_cast<double>(blown) / std::max(total, 1)}};
  o.pass = std::isfinite(A) && blown == 0;
  if (blown > 0) o.note = "blow-up paths present";
  return o;
}

}  // namespace

double variance_oracle_additive(const KernelTable& table, double t, double x) {
  if (!(t > 0.0)) throw DomainError("variance oracle needs t > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("variance oracle needs x in [0,1]");
  const double tol = table.series_tolerance() * 1e-2;
  double sum = 0.0;
  for (int n = 1;; ++n) {
    const double a = n * n * kPi * kPi;
    const double term = std::exp(-a * t) / a;
    const double s = std::sin(n * kPi * x);
    sum += 2.0 * s * s * term;
    if (term < tol * std::max(x * (1 - x), 1e-300) || n > 1000000) break;
  }
  return std::max(0.0, x * (1.0 - x) - sum);
}

double chaining_constant(double alpha, double alpha_bar) {
  if (!(alpha_bar > alpha && alpha > 0.0)) throw DomainError("chaining constant needs alpha_bar > alpha > 0");
  const double first = std::pow(2.0, alpha_bar) / (std::pow(2.0, alpha_bar - alpha) - 1.0);
  double series = 0.0;
  for (int n = 0; n < 2000; ++n) {
    const double term = std::pow(n + 1.0, alpha_bar + alpha) * std::exp(-static_cast<double>(n));
    series += term;
    if (term < 1e-18 * series) break;
  }
  return std::max(first, series);
}

std::vector<Probe> default_probes(const SolverConfig& cfg) {
  std::vector<Probe> probes;
  const double dt = cfg.dt();
  for (double frac : {0.125, 0.25, 0.5, 1.0}) {
    const int row = std::max(0, static_cast<int>(std::lround(frac * cfg.horizon / dt)) - 1);
    for (double x : {0.125, 0.25, 0.375, 0.5, 0.75}) {
      const int cell = std::clamp(static_cast<int>(std::lround(x * cfg.grid_points)) - 1, 0, cfg.grid_points - 2);
      probes.push_back({row, cell});
    }
  }
  return probes;
}

CheckReport check_isometry(const SolverConfig& cfg, const std::vector<Probe>& probes, const MonteCarloOptions& mc) {
  const auto start = Clock::now();
  const Solver solver(cfg);
  const KernelTable oracle_table(cfg.grid_points);  // exact eigenvalues, independent of cfg.kernel
  const int workers = resolve_workers(mc.workers);
  for (const auto& p : probes)
    if (p.row < 0 || p.row >= cfg.steps || p.cell < 0 || p.cell >= cfg.grid_points - 1)
      throw DomainError("isometry probe outside the grid");
  auto acc = parallel_reduce(mc.paths, kChunk, workers, Moments4(probes.size()), [&](Moments4& m, int p) {
    const auto tr = solver.simulate(static_cast<std::uint32_t>(p));
    for (size_t i = 0; i < probes.size(); ++i) m.add(i, tr.at(probes[i].row, probes[i].cell));
    ++m.n;
  });
  CheckReport rep;
  rep.name = "walsh_isometry";
  rep.bound = 3.0;
  rep.detail.columns = {"t", "x", "variance", "oracle", "stderr", "z"};
  double worst = 0.0;
  int outside = 0;
  for (size_t i = 0; i < probes.size(); ++i) {
    const double t = (probes[i].row + 1) * cfg.dt();
    const double x = (probes[i].cell + 1) * cfg.dx();
    const auto [var, se] = acc.variance(i);
    const double oracle = variance_oracle_additive(oracle_table, t, x);
    const double z = std::abs(var - oracle) / se;
    worst = std::max(worst, z);
    if (!(z <= 3.0)) ++outside;
    rep.detail.rows.push_back({t, x, var, oracle, se, z});
  }
  rep.statistic = rep.coarse = rep.fine = worst;
  rep.pass = outside == 0 && std::isfinite(worst);
  rep.diagnostics = {{"probes_outside_3se", static_cast<double>(outside)}, {"paths", static_cast<double>(mc.paths)}};
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_picard_contraction(const SolverConfig& cfg, int n_iter, double beta, double k,
                                     const MonteCarloOptions& mc) {
  if (n_iter < 3) throw ConfigError("picard contraction needs at least three iterations");
  auto level = [&](const SolverConfig& c) {
    const Solver solver(c);
    const int workers = resolve_workers(mc.workers);
    struct Acc {
      std::vector<MomentField> diffs;
      int blown = 0;
      void merge(const Acc& o) {
        if (diffs.empty()) diffs = o.diffs;
        else
          for (size_t i = 0; i < diffs.size(); ++i) diffs[i].merge(o.diffs[i]);
        blown += o.blown;
      }
    };
    Acc proto;
    for (int n = 1; n <= n_iter; ++n) proto.diffs.emplace_back(c.steps, c.grid_points - 1, std::vector<double>{k});
    Acc acc = parallel_reduce(mc.paths, kChunk, workers, proto, [&](Acc& a, int p) {
      const auto it = solver.picard(n_iter, static_cast<std::uint32_t>(p));
      if (std::any_of(it.begin(), it.end(), [](const Trajectory& t) { return t.blown_up(); })) {
        ++a.blown;
        return;
      }
      std::vector<double> d(it[0].values.size());
      for (int n = 1; n <= n_iter; ++n) {
        for (size_t i = 0; i < d.size(); ++i) d[i] = it[n].values[i] - it[n - 1].values[i];
        a.diffs[static_cast<size_t>(n - 1)].add(d);
      }
    });
    LevelOutcome o;
    const auto times = grid_times(c.steps, c.horizon);
    std::vector<double> norms;
    o.detail.columns = {"n", "norm", "stderr", "ratio"};
    for (int n = 1; n <= n_iter; ++n) {
      const auto ws = weighted_moment_sup(acc.diffs[static_cast<size_t>(n - 1)], 0, times, 0.25, beta, c.horizon);
      norms.push_back(ws.value);
      o.detail.rows.push_back({static_cast<double>(n), ws.value, ws.stderr_,
                               n >= 2 ? ws.value / norms[static_cast<size_t>(n - 2)] : kNaN});
    }
    // ratio N(U_{n+1} - U_n) / N(U_n - U_{n-1}) for n = 2..n_iter-1
    double worst = 0.0;
    for (int n = 2; n <= n_iter - 1; ++n) worst = std::max(worst, norms[static_cast<size_t>(n)] / norms[static_cast<size_t>(n - 1)]);
    o.statistic = worst;
    o.pass = worst <= 0.75 && acc.blown == 0;
    o.diagnostics = {{"blowup_paths", static_cast<double>(acc.blown)}, {"beta", beta}};
    if (acc.blown) o.note = "diverging iterates";
    return o;
  };
  return refined("picard_contraction", 0.75, cfg, mc, true, level);
}

CheckReport check_lebesgue_scaling(const SolverConfig& cfg, double alpha, const std::vector<double>& betas,
                                   const MonteCarloOptions& mc) {
  if (betas.size() < 4) throw ConfigError("scaling fit needs at least four beta values");
  auto level = [&](const SolverConfig& c) {
    const Solver solver(c);
    const auto X = ones_like(solver);
    const auto L = solver.lebesgue_convolve(X);
    LevelOutcome o;
    o.detail.columns = {"beta", "norm_L", "norm_X", "ratio"};
    std::vector<double> ratios;
    for (double b : betas) {
      const double nl = weighted_sup_norm(L, alpha, b, c.horizon), nx = weighted_sup_norm(X, alpha, b, c.horizon);
      ratios.push_back(nl / nx);
      o.detail.rows.push_back({b, nl, nx, nl / nx});
    }
    const auto fit = log_log_fit(betas, ratios);
    o.statistic = fit.slope;
    o.stderr_ = fit.slope_stderr;
    o.pass = std::abs(fit.slope + 1.0) <= 0.2;
    return o;
  };
  return refined("lebesgue_scaling", -1.0, cfg, mc, true, level);
}

CheckReport check_walsh_scaling(const SolverConfig& cfg, double alpha, const std::vector<double>& betas,
                                const MonteCarloOptions& mc) {
  if (betas.size() < 4) throw ConfigError("scaling fit needs at least four beta values");
  auto level = [&](const SolverConfig& c0) {
    const SolverConfig c = additive_config(c0);
    const Solver solver(c);
    const auto X = ones_like(solver);
    const int workers = resolve_workers(mc.workers);
    struct Acc {
      std::vector<double> sum, sum2;
      long n = 0;
      void merge(const Acc& o) {
        if (sum.empty()) {
          *this = o;
          return;
        }
        for (size_t i = 0; i < sum.size(); ++i) {
          sum[i] += o.sum[i];
          sum2[i] += o.sum2[i];
        }
        n += o.n;
      }
    };
    Acc proto{std::vector<double>(betas.size(), 0.0), std::vector<double>(betas.size(), 0.0), 0};
    Acc acc = parallel_reduce(mc.paths, kChunk, workers, proto, [&](Acc& a, int p) {
      const auto W = solver.walsh_convolve(X, solver.noise(static_cast<std::uint32_t>(p)));
      for (size_t i = 0; i < betas.size(); ++i) {
        const double v = weighted_sup_norm(W, alpha, 2.0 * betas[i], c.horizon);
        a.sum[i] += v;
        a.sum2[i] += v * v;
      }
      ++a.n;
    });
    LevelOutcome o;
    o.detail.columns = {"beta", "mean_norm", "stderr"};
    std::vector<double> means;
    const double N = static_cast<double>(acc.n);
    for (size_t i = 0; i < betas.size(); ++i) {
      const double m = acc.sum[i] / N;
      const double var = std::max(0.0, (acc.sum2[i] / N - m * m) * N / (N - 1));
      means.push_back(m);
      o.detail.rows.push_back({betas[i], m, std::sqrt(var / N)});
    }
    const auto fit = log_log_fit(betas, means);
    o.statistic = fit.slope;
    o.stderr_ = fit.slope_stderr;
    o.pass = std::abs(fit.slope + alpha) <= 0.15;
    o.diagnostics = {{"alpha", alpha}, {"sqrt_t_field_slope", -(alpha + 0.25)}};
    return o;
  };
  return refined("walsh_scaling_alpha_" + std::to_string(alpha).substr(0, 4), -alpha, cfg, mc, true, level);
}

CheckReport check_comparison(const SolverConfig& cfgA, const SolverConfig& cfgB, const MonteCarloOptions& mc,
                             double tol_scale) {
  if (cfgA.grid_points != cfgB.grid_points || cfgA.steps != cfgB.steps || cfgA.horizon != cfgB.horizon ||
      cfgA.master_seed != cfgB.master_seed)
    throw ConfigError("comparison runs must share grid, horizon and noise seed");
  const auto start = Clock::now();
  const Solver a(cfgA), b(cfgB);
  const int workers = resolve_workers(mc.workers);
  struct Acc {
    long violations = 0, points = 0;
    double worst = 0.0;
    int blown = 0;
    void merge(const Acc& o) {
      violations += o.violations;
      points += o.points;
      worst = std::max(worst, o.worst);
      blown += o.blown;
    }
  };
  const Acc acc = parallel_reduce(mc.paths, kChunk, workers, Acc{}, [&](Acc& s, int p) {
    const auto ua = a.simulate(static_cast<std::uint32_t>(p));
    const auto ub = b.simulate(static_cast<std::uint32_t>(p));
    if (ua.blown_up() || ub.blown_up()) {
      ++s.blown;
      return;
    }
    double scale = 0.0;
    for (double v : ub.values) scale = std::max(scale, std::abs(v));
    const double tol = tol_scale * scale;
    for (size_t i = 0; i < ua.values.size(); ++i) {
      const double excess = ua.values[i] - ub.values[i];
      if (excess > tol) ++s.violations;
      s.worst = std::max(s.worst, excess);
    }
    s.points += static_cast<long>(ua.values.size());
  });
  CheckReport rep;
  rep.name = "comparison";
  rep.bound = 1e-3;
  rep.statistic = rep.coarse = rep.fine =
      acc.points > 0 ? static_cast<double>(acc.violations) / static_cast<double>(acc.points) : kNaN;
  rep.pass = std::isfinite(rep.statistic) && rep.statistic < 1e-3;
  rep.inconclusive = !std::isfinite(rep.statistic);
  rep.diagnostics = {{"largest_excess", acc.worst}, {"blowup_paths", static_cast<double>(acc.blown)}};
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_stability(const SolverConfig& cfg, const InitialCondition& g, const std::vector<double>& eps,
                            const MonteCarloOptions& mc) {
  if (eps.size() < 2) throw ConfigError("stability fit needs at least two perturbation sizes");
  for (double e : eps)
    if (!(e >= 0.0)) throw ConfigError("perturbation sizes must be non-negative");
  auto level = [&](const SolverConfig& c) {
    const Solver base(c);
    std::vector<Solver> perturbed;
    for (double e : eps) {
      SolverConfig pc = c;
      pc.perturbation = g;
      pc.perturbation_scale = e;
      perturbed.emplace_back(pc);
    }
    const int workers = resolve_workers(mc.workers);
    struct Acc {
      std::vector<MomentField> fields;
      int blown = 0;
      void merge(const Acc& o) {
        if (fields.empty()) fields = o.fields;
        else
          for (size_t i = 0; i < fields.size(); ++i) fields[i].merge(o.fields[i]);
        blown += o.blown;
      }
    };
    Acc proto;
    for (size_t i = 0; i < eps.size(); ++i) proto.fields.emplace_back(c.steps, c.grid_points - 1, std::vector<double>{2.0});
    Acc acc = parallel_reduce(mc.paths, kChunk, workers, proto, [&](Acc& a, int p) {
      const auto u = base.simulate(static_cast<std::uint32_t>(p));
      std::vector<Trajectory> v;
      for (const auto& s : perturbed) v.push_back(s.simulate(static_cast<std::uint32_t>(p)));
      if (u.blown_up() || std::any_of(v.begin(), v.end(), [](const Trajectory& t) { return t.blown_up(); })) {
        ++a.blown;
        return;
      }
      std::vector<double> d(u.values.size());
      for (size_t e = 0; e < v.size(); ++e) {
        for (size_t i = 0; i < d.size(); ++i) d[i] = u.values[i] - v[e].values[i];
        a.fields[e].add(d);
      }
    });
    const auto times = grid_times(c.steps, c.horizon);
    const double gnorm = g.l2_norm();
    LevelOutcome o;
    o.detail.columns = {"eps", "M_T", "M_T_over_eps_g"};
    std::vector<double> m;
    for (size_t e = 0; e < eps.size(); ++e) {
      const double mt = eps[e] == 0.0 ? 0.0 : weighted_moment_sup(acc.fields[e], 0, times, 0.25, 0.0, c.horizon).value;
      m.push_back(mt);
      o.detail.rows.push_back({eps[e], mt, mt / (eps[e] * gnorm)});
    }
    std::vector<double> fe, fm;
    for (size_t e = 0; e < eps.size(); ++e)
      if (eps[e] > 0.0) {
        fe.push_back(eps[e]);
        fm.push_back(m[e]);
      }
    if (fe.size() < 2) {
      o.note = "fewer than two positive perturbation sizes";
      return o;
    }
    const auto fit = log_log_fit(fe, fm);
    o.statistic = fit.slope;
    o.stderr_ = fit.slope_stderr;
    o.pass = std::abs(fit.slope - 1.0) <= 0.2 && acc.blown == 0;
    o.diagnostics = {{"blowup_paths", static_cast<double>(acc.blown)}};
    return o;
  };
  return refined("stability", 1.0, cfg, mc, true, level);
}

CheckReport check_l2_continuity(const SolverConfig& cfg, const MonteCarloOptions& mc) {
  auto level = [&](const SolverConfig& c) {
    const Solver solver(c);
    const auto rows = dyadic_rows(c.steps, c.horizon);
    const int workers = resolve_workers(mc.workers);
    L2Curves proto;
    proto.rows = rows;
    proto.distance.resize(rows.size());
    proto.noise_sq.resize(rows.size());
    const double dx = c.dx();
    const auto acc = parallel_reduce(mc.paths, kChunk, workers, proto, [&](L2Curves& a, int p) {
      const auto d = solver.simulate_decomposed(static_cast<std::uint32_t>(p));
      if (d.total.blown_up()) return;
      for (size_t i = 0; i < rows.size(); ++i) {
        a.distance[i].push_back(l2_distance(d.total.row(rows[i]), d.total.initial, dx));
        const auto j = d.noise.row(rows[i]);
        double s = 0.0;
        for (double v : j) s += v * v;
        a.noise_sq[i].push_back(s * dx);
      }
    });
    return l2_outcome(acc, c.dt());
  };
  auto rep = refined("l2_continuity", 0.25, cfg, mc, false, level);
  return rep;
}

CheckReport check_l2_continuity(const Ensemble& ens) {
  ens.validate();
  const auto start = Clock::now();
  if (ens.members.empty()) throw DomainError("l2 continuity needs a non-empty ensemble");
  const auto& first = ens.members.front();
  const KernelTable table(first.grid_points);
  const auto c0 = table.to_coefficients(first.initial);
  const auto rows = dyadic_rows(first.steps, first.horizon);
  L2Curves acc;
  acc.rows = rows;
  acc.distance.resize(rows.size());
  acc.noise_sq.resize(rows.size());
  std::vector<std::vector<double>> heat;
  for (int r : rows) heat.push_back(table.to_grid(table.semigroup_apply(c0, first.time(r))));
  for (const auto& m : ens.members) {
    if (m.blown_up()) continue;
    for (size_t i = 0; i < rows.size(); ++i) {
      acc.distance[i].push_back(l2_distance(m.row(rows[i]), m.initial, m.dx()));
      // fluctuation around the heat flow of u0 stands in for the noise part
      const double d = l2_distance(m.row(rows[i]), heat[i], m.dx());
      acc.noise_sq[i].push_back(d * d);
    }
  }
  const auto o = l2_outcome(acc, first.dt());
  CheckReport rep;
  rep.name = "l2_continuity";
  rep.bound = 0.25;
  rep.statistic = rep.coarse = rep.fine = o.statistic;
  rep.stderr_ = o.stderr_;
  rep.pass = o.pass;
  rep.inconclusive = !std::isfinite(o.statistic);
  rep.diagnostics = o.diagnostics;
  rep.detail = o.detail;
  rep.note = o.note;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_decay_statistic(const SolverConfig& cfg, std::span<const double> cutoffs, double cutoff_alpha,
                                  double alpha, double t0, const MonteCarloOptions& mc) {
  if (!(alpha > 0.25)) throw ConfigError("decay statistic needs alpha > 1/4");
  const std::vector<double> N(cutoffs.begin(), cutoffs.end());
  auto level = [&](const SolverConfig& c) {
    const int workers = resolve_workers(mc.workers);
    DecayAcc proto;
    const auto acc = parallel_reduce(mc.paths, kChunk, workers, proto, [&](DecayAcc& a, int p) {
      const auto run = patched_simulate(c, N, cutoff_alpha, static_cast<std::uint32_t>(p));
      if (!run.accepted) ++a.exhausted;
      a.add(run.trajectory, alpha, t0, 4);
    });
    return decay_outcome(acc);
  };
  return refined("decay_statistic", kNaN, cfg, mc, true, level);
}

CheckReport check_decay_statistic(const Ensemble& ens, double alpha, double t0) {
  if (!(alpha > 0.25)) throw ConfigError("decay statistic needs alpha > 1/4");
  ens.validate();
  const auto start = Clock::now();
  DecayAcc acc;
  for (const auto& m : ens.members) acc.add(m, alpha, t0, 4);
  const auto o = decay_outcome(acc);
  CheckReport rep;
  rep.name = "decay_statistic";
  rep.statistic = rep.coarse = rep.fine = o.statistic;
  rep.pass = o.pass;
  rep.diagnostics = o.diagnostics;
  rep.detail = o.detail;
  rep.note = o.note;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_chaining(const Ensemble& ens, const ModulusSpec& spec, double alpha_bar) {
  ens.validate();
  const auto start = Clock::now();
  if (ens.members.empty()) throw DomainError("chaining check needs paths");
  const auto& first = ens.members.front();
  ChainAcc acc = chaining_prototype(first.steps, first.cells(), spec.k);
  for (const auto& m : ens.members)
    if (!m.blown_up()) chaining_add(acc, m, spec, alpha_bar);
  CheckReport rep;
  rep.name = "chaining";
  rep.bound = 1.0;
  if (acc.lhs_sum == 0.0) {
    rep.statistic = rep.coarse = rep.fine = 0.0;
    rep.pass = true;
    rep.note = "zero field";
  } else {
    const auto o = chaining_outcome(acc, spec, alpha_bar, first.steps, first.horizon);
    rep.statistic = rep.coarse = rep.fine = o.statistic;
    rep.pass = o.pass;
    rep.inconclusive = !std::isfinite(o.statistic);
    rep.diagnostics = o.diagnostics;
    rep.note = o.note;
  }
  if (!spec.chaining_hypothesis()) rep.diagnostics.emplace_back("hypothesis_k_met", 0.0);
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_chaining(const SolverConfig& cfg, const ModulusSpec& spec, double alpha_bar,
                           const MonteCarloOptions& mc) {
  auto level = [&](const SolverConfig& c0) {
    const SolverConfig c = additive_config(c0);
    const Solver solver(c);
    const int workers = resolve_workers(mc.workers);
    const auto acc = parallel_reduce(mc.paths, kChunk, workers, chaining_prototype(c.steps, c.grid_points - 1, spec.k),
                                     [&](ChainAcc& a, int p) {
                                       chaining_add(a, solver.simulate(static_cast<std::uint32_t>(p)), spec, alpha_bar);
                                     });
    auto o = chaining_outcome(acc, spec, alpha_bar, c.steps, c.horizon);
    o.diagnostics.emplace_back("hypothesis_k_met", spec.chaining_hypothesis() ? 1.0 : 0.0);
    return o;
  };
  return refined("chaining_beta_" + std::to_string(static_cast<int>(spec.beta)), 1.0, cfg, mc, true, level);
}

CheckReport check_moment_bound(const Ensemble& ens, const Envelope& envelope, double u0_norm,
                               const std::vector<double>& ks) {
  ens.validate();
  const auto start = Clock::now();
  if (ens.members.empty()) throw DomainError("moment bound needs paths");
  const auto& first = ens.members.front();
  MomentField field(first.steps, first.cells(), ks);
  int blown = 0;
  for (const auto& m : ens.members) {
    if (m.blown_up()) {
      ++blown;
      continue;
    }
    field.add(m.values);
  }
  CheckReport rep;
  rep.name = "moment_bound";
  const auto o = moment_outcome(field, grid_times(first.steps, first.horizon), envelope, u0_norm, blown, ens.size());
  rep.statistic = rep.coarse = rep.fine = o.statistic;
  rep.pass = o.pass;
  rep.diagnostics = o.diagnostics;
  rep.detail = o.detail;
  rep.note = o.note;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

CheckReport check_moment_bound(const SolverConfig& cfg, const Envelope& envelope, const std::vector<double>& ks,
                               const MonteCarloOptions& mc) {
  for (double k : ks)
    if (!(k >= 1.0 && k <= 8.0)) throw ConfigError("moment orders must lie in [1, 8]");
  auto level = [&](const SolverConfig& c) {
    const Solver solver(c);
    const int workers = resolve_workers(mc.workers);
    struct Acc {
      MomentField field;
      int blown = 0;
      void merge(const Acc& o) {
        field.merge(o.field);
        blown += o.blown;
      }
    };
    const auto acc = parallel_reduce(mc.paths, kChunk, workers, Acc{MomentField(c.steps, c.grid_points - 1, ks), 0},
                                     [&](Acc& a, int p) {
                                       const auto t = solver.simulate(static_cast<std::uint32_t>(p));
                                       if (t.blown_up()) {
                                         ++a.blown;
                                         return;
                                       }
                                       a.field.add(t.values);
                                     });
    return moment_outcome(acc.field, grid_times(c.steps, c.horizon), envelope, c.initial.l2_norm(), acc.blown,
                          mc.paths);
  };
  return refined("moment_bound", kNaN, cfg, mc, true, level);
}

CheckReport check_uniqueness(const SolverConfig& cfg, double N, double N_prime, double cutoff_alpha,
                             const MonteCarloOptions& mc) {
  if (!(N_prime > N)) throw ConfigError("uniqueness check needs N' > N");
  const auto start = Clock::now();
  const int workers = resolve_workers(mc.workers);
  struct Acc {
    double worst = 0.0;
    int stopped = 0, paths = 0;
    std::vector<double> stop_times;
    void merge(const Acc& o) {
      worst = std::max(worst, o.worst);
      stopped += o.stopped;
      paths += o.paths;
      stop_times.insert(stop_times.end(), o.stop_times.begin(), o.stop_times.end());
    }
  };
  const std::vector<double> a_seq{N}, b_seq{N_prime};
  const auto acc = parallel_reduce(mc.paths, kChunk, workers, Acc{}, [&](Acc& s, int p) {
    const auto a = patched_simulate(cfg, a_seq, cutoff_alpha, static_cast<std::uint32_t>(p));
    const auto b = patched_simulate(cfg, b_seq, cutoff_alpha, static_cast<std::uint32_t>(p));
    const auto& rec = a.records.front();
    const int limit = rec.stopped() ? rec.stop_row : a.trajectory.steps;
    if (rec.stopped()) {
      ++s.stopped;
      s.stop_times.push_back(rec.stop_time);
    }
    ++s.paths;
    const size_t cells = static_cast<size_t>(a.trajectory.cells());
    for (size_t i = 0; i < static_cast<size_t>(limit) * cells; ++i) {
      const double d = std::abs(a.trajectory.values[i] - b.trajectory.values[i]);
      s.worst = std::max(s.worst, std::isfinite(d) ? d : INFINITY);
    }
  });
  CheckReport rep;
  rep.name = "uniqueness";
  rep.bound = 1e-12;
  rep.statistic = rep.coarse = rep.fine = acc.worst;
  rep.pass = acc.worst <= 1e-12;
  rep.diagnostics = {{"stopped_fraction", static_cast<double>(acc.stopped) / std::max(acc.paths, 1)},
                     {"N", N},
                     {"N_prime", N_prime}};
  if (!acc.stop_times.empty()) rep.diagnostics.emplace_back("median_stop_time", median(acc.stop_times));
  if (acc.stopped == 0) rep.note = "no path stopped before the horizon";
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

}  // namespace shelab
