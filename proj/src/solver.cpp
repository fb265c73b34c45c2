#include "shelab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void set_row(Trajectory& traj, int r, std::span<const double> v) {
  std::copy(v.begin(), v.end(), traj.row(r).begin());
}

void mark_blowup(Trajectory& traj, int r) {
  traj.blowup_row = r;
  std::fill(traj.values.begin() + static_cast<std::ptrdiff_t>(r) * traj.cells(), traj.values.end(),
            std::numeric_limits<double>::quiet_NaN());
}

/// State of the field at grid time m: the initial field for m = 0, else row m-1.
std::span<const double> field_at(const Trajectory& traj, int m) {
  return m == 0 ? std::span<const double>(traj.initial) : traj.row(m - 1);
}

Trajectory like(const Trajectory& src) {
  Trajectory out = Trajectory::zeros(src.grid_points, src.steps, src.horizon);
  out.master_seed = src.master_seed;
  out.path_index = src.path_index;
  out.config_digest = src.config_digest;
  return out;
}

void check_shape(const Trajectory& traj, const KernelTable& table) {
  if (traj.grid_points != table.grid_points())
    throw DomainError("trajectory grid does not match the kernel table");
  if (static_cast<int>(traj.initial.size()) != traj.cells() ||
      traj.values.size() != static_cast<size_t>(traj.cells()) * traj.steps)
    throw DomainError("trajectory storage does not match its shape");
}

Trajectory lebesgue_impl(const Trajectory& F, const KernelTable& table, std::span<const double> decay) {
  check_shape(F, table);
  const auto& tr = table.transform();
  const double dt = F.dt();
  const size_t M = static_cast<size_t>(table.mode_count());
  Trajectory out = like(F);
  std::vector<double> acc(M, 0.0), tmp(M), grid(M);
  for (int m = 0; m < F.steps; ++m) {
    tr.forward(field_at(F, m), tmp);
    for (size_t n = 0; n < M; ++n) acc[n] = decay[n] * (acc[n] + dt * tmp[n]);
    tr.inverse(acc, grid);
    set_row(out, m, grid);
  }
  return out;
}

Trajectory walsh_impl(const Trajectory& X, const KernelTable& table, const NoiseStream& stream,
                      std::span<const double> decay, std::span<const double> factor) {
  check_shape(X, table);
  if (stream.grid_points() != X.grid_points || std::abs(stream.dt() - X.dt()) > 1e-15 * X.dt())
    throw DomainError("noise stream grid does not match the trajectory");
  const auto& tr = table.transform();
  const size_t M = static_cast<size_t>(table.mode_count());
  Trajectory out = like(X);
  out.master_seed = stream.master_seed();
  out.path_index = stream.path_index();
  std::vector<double> acc(M, 0.0), w(M), prod(M), tmp(M), grid(M);
  for (int m = 0; m < X.steps; ++m) {
    stream.fill_increment(static_cast<std::uint32_t>(m), w);
    const auto x = field_at(X, m);
    for (size_t j = 0; j < M; ++j) prod[j] = x[j] * w[j];
    tr.forward(prod, tmp);
    for (size_t n = 0; n < M; ++n) acc[n] = decay[n] * acc[n] + factor[n] * tmp[n];
    tr.inverse(acc, grid);
    set_row(out, m, grid);
  }
  return out;
}

std::vector<double> decay_factors(const KernelTable& table, double dt) {
  std::vector<double> d(static_cast<size_t>(table.mode_count()));
  for (int n = 1; n <= table.mode_count(); ++n) d[static_cast<size_t>(n - 1)] = std::exp(-table.eigenvalue(n) * dt);
  return d;
}

}  // namespace

const char* noise_scheme_name(NoiseScheme s) {
  return s == NoiseScheme::exact_variance ? "exact_variance" : "left_point";
}

NoiseScheme parse_noise_scheme(const std::string& name) {
  if (name == "exact_variance") return NoiseScheme::exact_variance;
  if (name == "left_point") return NoiseScheme::left_point;
  throw ConfigError("unknown noise scheme '" + name + "'");
}

std::vector<double> noise_damping(const KernelTable& table, double dt, NoiseScheme scheme) {
  std::vector<double> f(static_cast<size_t>(table.mode_count()));
  for (int n = 1; n <= table.mode_count(); ++n) {
    const double a = table.eigenvalue(n) * dt;
    f[static_cast<size_t>(n - 1)] =
        scheme == NoiseScheme::left_point ? std::exp(-a) : std::sqrt(-std::expm1(-2.0 * a) / (2.0 * a));
  }
  return f;
}

void SolverConfig::validate() const {
  if (grid_points < 2) throw ConfigError("n_x must be at least 2");
  if (steps < 1) throw ConfigError("n_t must be at least 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon T must be positive");
  if (horizon > 1.0 && !allow_long_horizon) throw ConfigError("horizon T > 1 needs allow_long_horizon");
  if (truncation) truncate_drift(drift, truncation->N, truncation->alpha);
  if (drift.kind == DriftKind::custom && !drift.custom) throw ConfigError("custom drift without a function");
  if (sigma.kind == SigmaKind::custom && !sigma.custom) throw ConfigError("custom sigma without a function");
  if (!(kernel.eigenvalue_scale > 0.0)) throw ConfigError("eigenvalue_scale must be positive");
  if (!(noise_variance_scale >= 0.0)) throw ConfigError("noise variance_scale must be non-negative");
  if (!std::isfinite(perturbation_scale)) throw ConfigError("perturbation scale must be finite");
}

std::string SolverConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "n_x=" << grid_points << ";n_t=" << steps << ";T=" << horizon << ";u0=" << initial.describe();
  if (initial.preset == InitialPreset::samples)
    for (double v : initial.samples) os << "," << v;
  if (perturbation_scale != 0.0) os << ";perturbation=" << perturbation_scale << "*" << perturbation.describe();
  if (perturbation.preset == InitialPreset::samples && perturbation_scale != 0.0)
    for (double v : perturbation.samples) os << "," << v;
  os << ";drift=" << drift.describe();
  if (truncation) os << ";N=" << truncation->N << ";alpha=" << truncation->alpha;
  os << ";sigma=" << sigma.describe() << ";switch=" << kernel.switch_time << ";tol=" << kernel.series_tolerance
     << ";eig_scale=" << kernel.eigenvalue_scale << ";noise=" << noise_scheme_name(noise_scheme)
     << ";var_scale=" << noise_variance_scale << ";seed=" << master_seed;
  return os.str();
}

std::string SolverConfig::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Solver::Solver(SolverConfig config) : config_(std::move(config)), kernel_((config_.validate(), config_.grid_points), config_.kernel) {
  if (config_.truncation) truncated_ = truncate_drift(config_.drift, config_.truncation->N, config_.truncation->alpha);
  initial_coeffs_ = config_.initial.coefficients(config_.grid_points);
  if (config_.perturbation_scale != 0.0) {
    const auto p = config_.perturbation.coefficients(config_.grid_points);
    for (size_t n = 0; n < p.coefficients.size(); ++n)
      initial_coeffs_.coefficients[n] += config_.perturbation_scale * p.coefficients[n];
  }
  initial_grid_ = kernel_.to_grid(initial_coeffs_);
  decay_ = decay_factors(kernel_, config_.dt());
  noise_factor_ = noise_damping(kernel_, config_.dt(), config_.noise_scheme);
}

double Solver::drift(double t, double z) const {
  return truncated_ ? (*truncated_)(t, z) : config_.drift(z);
}

NoiseStream Solver::noise(std::uint32_t path_index) const {
  return NoiseStream(config_.master_seed, path_index, config_.grid_points, config_.dt(), config_.noise_variance_scale);
}

Trajectory Solver::blank(std::uint32_t path_index) const {
  Trajectory t = Trajectory::zeros(config_.grid_points, config_.steps, config_.horizon);
  t.master_seed = config_.master_seed;
  t.path_index = path_index;
  t.config_digest = config_.digest();
  t.initial = initial_grid_;
  return t;
}

std::vector<double> Solver::step(std::span<const double> state, double t, std::span<const double> increment) const {
  const size_t M = static_cast<size_t>(cells());
  if (state.size() != M || increment.size() != M) throw DomainError("step: state and increment need n_x - 1 values");
  const auto& tr = kernel_.transform();
  const double dt = config_.dt();
  std::vector<double> a(M), s(M), ca(M), cs(M);
  for (size_t j = 0; j < M; ++j) {
    a[j] = state[j] + dt * drift(t, state[j]);
    s[j] = config_.sigma(state[j]) * increment[j];
  }
  tr.forward(a, ca);
  tr.forward(s, cs);
  for (size_t n = 0; n < M; ++n) ca[n] = decay_[n] * ca[n] + noise_factor_[n] * cs[n];
  return tr.inverse(ca);
}

Trajectory Solver::simulate(std::uint32_t path_index) const {
  const size_t M = static_cast<size_t>(cells());
  const auto& tr = kernel_.transform();
  const double dt = config_.dt();
  const NoiseStream stream = noise(path_index);
  Trajectory out = blank(path_index);
  std::vector<double> c = initial_coeffs_.coefficients, u = initial_grid_;
  std::vector<double> w(M), d(M), s(M), cd(M), cs(M);
  for (int m = 0; m < config_.steps; ++m) {
    const double t = m * dt;
    stream.fill_increment(static_cast<std::uint32_t>(m), w);
    for (size_t j = 0; j < M; ++j) {
      d[j] = dt * drift(t, u[j]);
      s[j] = config_.sigma(u[j]) * w[j];
    }
    tr.forward(d, cd);
    tr.forward(s, cs);
    for (size_t n = 0; n < M; ++n) c[n] = decay_[n] * (c[n] + cd[n]) + noise_factor_[n] * cs[n];
    tr.inverse(c, u);
    if (!all_finite(u)) {
      mark_blowup(out, m);
      return out;
    }
    set_row(out, m, u);
  }
  return out;
}

Decomposition Solver::simulate_decomposed(std::uint32_t path_index) const {
  const size_t M = static_cast<size_t>(cells());
  const auto& tr = kernel_.transform();
  const double dt = config_.dt();
  const NoiseStream stream = noise(path_index);
  Decomposition out{blank(path_index), blank(path_index), blank(path_index), blank(path_index)};
  std::fill(out.drift.initial.begin(), out.drift.initial.end(), 0.0);
  std::fill(out.noise.initial.begin(), out.noise.initial.end(), 0.0);
  std::vector<double> c = initial_coeffs_.coefficients, g = c, ci(M, 0.0), cj(M, 0.0), u = initial_grid_;
  std::vector<double> w(M), d(M), s(M), cd(M), cs(M), grid(M);
  for (int m = 0; m < config_.steps; ++m) {
    const double t = m * dt;
    stream.fill_increment(static_cast<std::uint32_t>(m), w);
    for (size_t j = 0; j < M; ++j) {
      d[j] = dt * drift(t, u[j]);
      s[j] = config_.sigma(u[j]) * w[j];
    }
    tr.forward(d, cd);
    tr.forward(s, cs);
    for (size_t n = 0; n < M; ++n) {
      c[n] = decay_[n] * (c[n] + cd[n]) + noise_factor_[n] * cs[n];
      g[n] = decay_[n] * g[n];
      ci[n] = decay_[n] * (ci[n] + cd[n]);
      cj[n] = decay_[n] * cj[n] + noise_factor_[n] * cs[n];
    }
    tr.inverse(c, u);
    if (!all_finite(u)) {
      for (auto* traj : {&out.total, &out.semigroup, &out.drift, &out.noise}) mark_blowup(*traj, m);
      return out;
    }
    set_row(out.total, m, u);
    tr.inverse(g, grid);
    set_row(out.semigroup, m, grid);
    tr.inverse(ci, grid);
    set_row(out.drift, m, grid);
    tr.inverse(cj, grid);
    set_row(out.noise, m, grid);
  }
  return out;
}

Trajectory Solver::lebesgue_convolve(const Trajectory& F) const {
  if (F.steps != config_.steps || F.horizon != config_.horizon) throw DomainError("lebesgue_convolve: time grid mismatch");
  return lebesgue_impl(F, kernel_, decay_);
}

Trajectory Solver::walsh_convolve(const Trajectory& X, const NoiseStream& stream) const {
  if (X.steps != config_.steps || X.horizon != config_.horizon) throw DomainError("walsh_convolve: time grid mismatch");
  return walsh_impl(X, kernel_, stream, decay_, noise_factor_);
}

std::vector<Trajectory> Solver::picard(int n_iter, std::uint32_t path_index) const {
  if (n_iter < 0) throw DomainError("picard: n_iter must be non-negative");
  const size_t M = static_cast<size_t>(cells());
  const auto& tr = kernel_.transform();
  const double dt = config_.dt();
  const int steps = config_.steps;
  const NoiseStream stream = noise(path_index);

  // One noise realisation shared by every iterate.
  std::vector<double> noise_field(M * static_cast<size_t>(steps));
  for (int m = 0; m < steps; ++m)
    stream.fill_increment(static_cast<std::uint32_t>(m), std::span<double>(noise_field).subspan(M * m, M));

  std::vector<Trajectory> iterates;
  iterates.reserve(static_cast<size_t>(n_iter) + 1);

  // U_0 = G_t u0; its coefficient rows are kept to rebuild later iterates.
  std::vector<double> g_coeffs(M * static_cast<size_t>(steps));
  {
    Trajectory u0 = blank(path_index);
    std::vector<double> g = initial_coeffs_.coefficients, grid(M);
    for (int m = 0; m < steps; ++m) {
      for (size_t n = 0; n < M; ++n) g[n] *= decay_[n];
      std::copy(g.begin(), g.end(), g_coeffs.begin() + static_cast<std::ptrdiff_t>(M * m));
      tr.inverse(g, grid);
      set_row(u0, m, grid);
    }
    iterates.push_back(std::move(u0));
  }

  std::vector<double> ci(M), cj(M), d(M), s(M), cd(M), cs(M), c(M), grid(M);
  for (int it = 0; it < n_iter; ++it) {
    const Trajectory& prev = iterates.back();
    Trajectory next = blank(path_index);
    std::fill(ci.begin(), ci.end(), 0.0);
    std::fill(cj.begin(), cj.end(), 0.0);
    for (int m = 0; m < steps; ++m) {
      const double t = m * dt;
      const auto u = field_at(prev, m);
      const double* w = noise_field.data() + M * m;
      for (size_t j = 0; j < M; ++j) {
        d[j] = dt * drift(t, u[j]);
        s[j] = config_.sigma(u[j]) * w[j];
      }
      tr.forward(d, cd);
      tr.forward(s, cs);
      const double* g = g_coeffs.data() + M * m;
      for (size_t n = 0; n < M; ++n) {
        ci[n] = decay_[n] * (ci[n] + cd[n]);
        cj[n] = decay_[n] * cj[n] + noise_factor_[n] * cs[n];
        c[n] = g[n] + ci[n] + cj[n];
      }
      tr.inverse(c, grid);
      if (!all_finite(grid)) {
        mark_blowup(next, m);
        break;
      }
      set_row(next, m, grid);
    }
    iterates.push_back(std::move(next));
  }
  return iterates;
}

std::vector<double> step(std::span<const double> state, double t, const SolverConfig& cfg,
                         std::span<const double> increment) {
  return Solver(cfg).step(state, t, increment);
}

Trajectory simulate(const SolverConfig& cfg, std::uint32_t path_index) { return Solver(cfg).simulate(path_index); }

Trajectory lebesgue_convolve(const Trajectory& F, const KernelTable& table) {
  return lebesgue_impl(F, table, decay_factors(table, F.dt()));
}

Trajectory walsh_convolve(const Trajectory& X, const KernelTable& table, const NoiseStream& stream,
                          NoiseScheme scheme) {
  return walsh_impl(X, table, stream, decay_factors(table, X.dt()), noise_damping(table, X.dt(), scheme));
}

std::vector<Trajectory> picard_run(const SolverConfig& cfg, int n_iter, std::uint32_t path_index) {
  return Solver(cfg).picard(n_iter, path_index);
}

StoppingRecord detect_stop(const Trajectory& traj, double N, double alpha) {
  StoppingRecord rec;
  rec.N = N;
  rec.alpha = alpha;
  for (int r = 0; r < traj.steps; ++r) {
    const double t = traj.time(r);
    const double level = N / std::pow(t, alpha);
    bool trips = false;
    for (double v : traj.row(r)) {
      if (!std::isfinite(v) || std::abs(v) > level) {
        trips = true;
        break;
      }
    }
    if (trips) {
      rec.stop_time = t;
      rec.stop_row = r;
      return rec;
    }
  }
  return rec;
}

PatchedRun patched_simulate(const SolverConfig& cfg, std::span<const double> N_sequence, double alpha,
                            std::uint32_t path_index) {
  if (N_sequence.empty()) throw ConfigError("patched_simulate needs at least one cutoff");
  if (cfg.truncation) throw ConfigError("patched_simulate expects an untruncated drift");
  for (size_t i = 1; i < N_sequence.size(); ++i)
    if (!(N_sequence[i] > N_sequence[i - 1])) throw ConfigError("cutoff sequence must be increasing");
  PatchedRun run;
  for (size_t i = 0; i < N_sequence.size(); ++i) {
    SolverConfig c = cfg;
    c.truncation = Truncation{N_sequence[i], alpha};
    Trajectory traj = Solver(c).simulate(path_index);
    const StoppingRecord rec = detect_stop(traj, N_sequence[i], alpha);
    run.records.push_back(rec);
    run.trajectory = std::move(traj);
    if (!rec.stopped()) {
      run.accepted = static_cast<int>(i);
      return run;
    }
  }
  // Exhausted: keep u_N of the last cutoff up to its stopping time.
  const int r = run.records.back().stop_row;
  Trajectory& traj = run.trajectory;
  traj.stop_row = r - 1;
  std::fill(traj.values.begin() + static_cast<std::ptrdiff_t>(r) * traj.cells(), traj.values.end(),
            std::numeric_limits<double>::quiet_NaN());
  return run;
}

}  // namespace shelab
