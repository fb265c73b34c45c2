#include "shelab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

inline double abs_pow(double x, double k) {
  const double a = std::abs(x);
  if (k == 2.0) return a * a;
  if (k == std::floor(k) && k <= 16.0) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(k); ++i) r *= a;
    return r;
  }
  return std::pow(a, k);
}

inline double weight(double t, double alpha, double beta) { return std::pow(t, alpha) * std::exp(-beta * t); }

void check_order(double k) {
  if (!(k >= 1.0)) throw DomainError("moment order must be >= 1");
  if (k > 8.0) throw DomainError("moment order is capped at 8");
}

std::vector<const Trajectory*> usable(const Ensemble& ens) {
  std::vector<const Trajectory*> out;
  for (const auto& m : ens.members)
    if (!m.blown_up()) out.push_back(&m);
  return out;
}

}  // namespace

Trajectory Trajectory::zeros(int grid_points, int steps, double horizon) {
  if (grid_points < 2 || steps < 1 || !(horizon > 0.0)) throw DomainError("trajectory: invalid grid");
  Trajectory t;
  t.grid_points = grid_points;
  t.steps = steps;
  t.horizon = horizon;
  t.initial.assign(static_cast<size_t>(grid_points - 1), 0.0);
  t.values.assign(static_cast<size_t>(steps) * (grid_points - 1), 0.0);
  return t;
}

std::span<double> Trajectory::row(int r) {
  return {values.data() + static_cast<size_t>(r) * cells(), static_cast<size_t>(cells())};
}

std::span<const double> Trajectory::row(int r) const {
  return {values.data() + static_cast<size_t>(r) * cells(), static_cast<size_t>(cells())};
}

double Trajectory::value_at(int r, int i) const {
  if (i <= 0 || i >= grid_points) return 0.0;
  return at(r, i - 1);
}

int Trajectory::last_row_at_or_before(double T) const {
  const double tol = 1e-12 * horizon;
  int r = static_cast<int>(std::floor((T + tol) / dt())) - 1;
  return std::min(r, steps - 1);
}

void Ensemble::validate() const {
  if (members.empty()) return;
  const auto& a = members.front();
  for (const auto& b : members)
    if (b.grid_points != a.grid_points || b.steps != a.steps || b.horizon != a.horizon ||
        b.config_digest != a.config_digest)
      throw DomainError("ensemble members do not share grid, horizon and configuration");
}

int Ensemble::blowup_count() const {
  return static_cast<int>(std::count_if(members.begin(), members.end(), [](const auto& m) { return m.blown_up(); }));
}

double weighted_sup_norm(const Trajectory& traj, double alpha, double beta, double T) {
  if (T > traj.horizon * (1 + 1e-12)) throw DomainError("weighted sup: T exceeds the trajectory horizon");
  const int last = traj.last_row_at_or_before(T);
  if (last < 0) throw DomainError("weighted sup: no grid time in (0, T]");
  double best = 0.0;
  for (int r = 0; r <= last; ++r) {
    const double w = weight(traj.time(r), alpha, beta);
    double m = 0.0;
    for (double v : traj.row(r)) m = std::max(m, std::abs(v));
    best = std::max(best, w * m);
  }
  return best;
}

MomentField::MomentField(int rows, int cols, std::vector<double> orders)
    : rows_(rows), cols_(cols), orders_(std::move(orders)) {
  const size_t n = static_cast<size_t>(rows) * cols * orders_.size();
  sums_.assign(n, 0.0);
  sums2_.assign(n, 0.0);
}

void MomentField::add(std::span<const double> field) {
  const size_t n = static_cast<size_t>(rows_) * cols_;
  if (field.size() != n) throw DomainError("moment field: shape mismatch");
  for (size_t q = 0; q < orders_.size(); ++q) {
    const double k = orders_[q];
    double* s = sums_.data() + q * n;
    double* s2 = sums2_.data() + q * n;
    for (size_t i = 0; i < n; ++i) {
      const double p = abs_pow(field[i], k);
      s[i] += p;
      s2[i] += p * p;
    }
  }
  ++count_;
}

void MomentField::merge(const MomentField& other) {
  if (other.count_ == 0) return;
  if (count_ == 0 && sums_.empty()) {
    *this = other;
    return;
  }
  if (other.sums_.size() != sums_.size()) throw DomainError("moment field: merge shape mismatch");
  for (size_t i = 0; i < sums_.size(); ++i) {
    sums_[i] += other.sums_[i];
    sums2_[i] += other.sums2_[i];
  }
  count_ += other.count_;
}

double MomentField::moment(int q, size_t i) const {
  const size_t n = static_cast<size_t>(rows_) * cols_;
  return sums_[static_cast<size_t>(q) * n + i] / static_cast<double>(count_);
}

double MomentField::moment_stderr(int q, size_t i) const {
  if (count_ < 2) return 0.0;
  const size_t n = static_cast<size_t>(rows_) * cols_;
  const double c = static_cast<double>(count_);
  const double m = sums_[static_cast<size_t>(q) * n + i] / c;
  const double m2 = sums2_[static_cast<size_t>(q) * n + i] / c;
  return std::sqrt(std::max(0.0, m2 - m * m) / (c - 1.0));
}

WeightedSup weighted_moment_sup(const MomentField& field, int q, std::span<const double> times, double alpha,
                                double beta, double T) {
  if (field.count() < 1) throw DomainError("weighted moment sup: empty field");
  const double k = field.orders().at(static_cast<size_t>(q));
  WeightedSup best;
  bool any = false;
  for (int r = 0; r < field.rows(); ++r) {
    const double t = times[static_cast<size_t>(r)];
    if (t > T * (1 + 1e-12)) break;
    any = true;
    const double w = weight(t, alpha, beta);
    for (int j = 0; j < field.cols(); ++j) {
      const size_t i = static_cast<size_t>(r) * field.cols() + j;
      const double m = field.moment(q, i);
      if (!std::isfinite(m)) throw NumericalError("moment estimate is not finite");
      const double v = w * std::pow(m, 1.0 / k);
      if (v > best.value || best.row < 0) {
        best.value = v;
        best.row = r;
        best.col = j;
        const double se = field.moment_stderr(q, i);
        best.stderr_ = m > 0.0 ? w * std::pow(m, 1.0 / k - 1.0) * se / k : 0.0;
      }
    }
  }
  if (!any) throw DomainError("weighted moment sup: no grid time in (0, T]");
  return best;
}

Estimate empirical_moment_norm(const Ensemble& ens, double k, double alpha, double beta, double T) {
  check_order(k);
  ens.validate();
  const auto paths = usable(ens);
  if (paths.size() < 2) throw DomainError("moment norm needs at least two usable paths");
  const Trajectory& first = *paths.front();
  const int last = first.last_row_at_or_before(T);
  if (last < 0) throw DomainError("moment norm: no grid time in (0, T]");
  if (T > first.horizon * (1 + 1e-12)) throw DomainError("moment norm: T exceeds the horizon");
  const int cells = first.cells();
  const size_t npts = static_cast<size_t>(last + 1) * cells;

  std::vector<double> sum(npts, 0.0);
  for (const auto* p : paths)
    for (size_t i = 0; i < npts; ++i) sum[i] += abs_pow(p->values[i], k);
  const double P = static_cast<double>(paths.size());

  std::vector<double> wval(npts);
  for (size_t i = 0; i < npts; ++i) {
    const double m = sum[i] / P;
    if (!std::isfinite(m)) throw NumericalError("moment estimate is not finite");
    wval[i] = weight(first.time(static_cast<int>(i / cells)), alpha, beta) * std::pow(m, 1.0 / k);
  }
  Estimate est;
  est.value = *std::max_element(wval.begin(), wval.end());

  // Bootstrap over the leading candidate points; points far below the sup cannot become the maximiser.
  std::vector<size_t> order(npts);
  std::iota(order.begin(), order.end(), size_t{0});
  const size_t K = std::min<size_t>(64, npts);
  std::partial_sort(order.begin(), order.begin() + K, order.end(), [&](size_t a, size_t b) { return wval[a] > wval[b]; });
  std::vector<double> per_path(paths.size() * K);
  for (size_t p = 0; p < paths.size(); ++p)
    for (size_t c = 0; c < K; ++c) per_path[p * K + c] = abs_pow(paths[p]->values[order[c]], k);
  std::vector<double> w(K);
  for (size_t c = 0; c < K; ++c) w[c] = weight(first.time(static_cast<int>(order[c] / cells)), alpha, beta);
  est.stderr_ = bootstrap_stderr(static_cast<int>(paths.size()), 200, 0x5eed, [&](std::span<const int> idx) {
    double best = 0.0;
    for (size_t c = 0; c < K; ++c) {
      double s = 0.0;
      for (int i : idx) s += per_path[static_cast<size_t>(i) * K + c];
      best = std::max(best, w[c] * std::pow(s / P, 1.0 / k));
    }
    return best;
  });
  return est;
}

double m_norm(const Ensemble& ens, double t) {
  ens.validate();
  const auto paths = usable(ens);
  if (paths.empty()) throw DomainError("M norm needs at least one usable path");
  const Trajectory& first = *paths.front();
  if (t > first.horizon * (1 + 1e-12)) throw DomainError("M norm: t exceeds the horizon");
  const int last = first.last_row_at_or_before(t);
  if (last < 0) throw DomainError("M norm: no grid time in (0, t]");
  const int cells = first.cells();
  double best = 0.0;
  for (int r = 0; r <= last; ++r)
    for (int j = 0; j < cells; ++j) {
      double s = 0.0;
      for (const auto* p : paths) s += p->at(r, j) * p->at(r, j);
      const double v = std::pow(first.time(r), 0.25) * std::sqrt(s / static_cast<double>(paths.size()));
      if (!std::isfinite(v)) throw NumericalError("M norm is not finite");
      best = std::max(best, v);
    }
  return best;
}

std::vector<GridPair> holder_pairs(int steps, int cells, int random_pairs, std::uint64_t seed) {
  std::vector<GridPair> pairs;
  pairs.reserve(static_cast<size_t>(std::max(0, steps - 1)) * cells + static_cast<size_t>(random_pairs));
  for (int r = 0; r + 1 < steps; ++r)
    for (int j = 0; j < cells; ++j) pairs.push_back({r, j, r + 1, j});

  const int max_a = steps > 1 ? static_cast<int>(std::floor(std::log2(steps - 1))) : -1;
  const int max_b = cells > 1 ? static_cast<int>(std::floor(std::log2(cells - 1))) : -1;
  if (max_a < 0 && max_b < 0) return pairs;
  std::mt19937_64 rng(seed);
  int made = 0;
  while (made < random_pairs) {
    // -1 encodes a zero gap.
    const int a = std::uniform_int_distribution<int>(-1, max_a)(rng);
    const int b = std::uniform_int_distribution<int>(-1, max_b)(rng);
    if (a < 0 && b < 0) continue;
    const int gt = a < 0 ? 0 : (1 << a);
    const int gx = b < 0 ? 0 : (1 << b);
    const int r1 = std::uniform_int_distribution<int>(0, steps - 1 - gt)(rng);
    const int j1 = std::uniform_int_distribution<int>(0, cells - 1 - gx)(rng);
    const bool flip = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    pairs.push_back(flip ? GridPair{r1, j1 + gx, r1 + gt, j1} : GridPair{r1, j1, r1 + gt, j1 + gx});
    ++made;
  }
  return pairs;
}

PairMoments::PairMoments(std::vector<GridPair> pairs, double k) : pairs_(std::move(pairs)), k_(k) {
  sums_.assign(pairs_.size(), 0.0);
}

void PairMoments::add(const Trajectory& traj) {
  for (size_t p = 0; p < pairs_.size(); ++p) {
    const auto& g = pairs_[p];
    sums_[p] += abs_pow(traj.at(g.r2, g.j2) - traj.at(g.r1, g.j1), k_);
  }
  ++count_;
}

void PairMoments::merge(const PairMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0 && sums_.size() != other.sums_.size()) {
    *this = other;
    return;
  }
  for (size_t p = 0; p < sums_.size(); ++p) sums_[p] += other.sums_[p];
  count_ += other.count_;
}

double holder_statistic(const PairMoments& moments, const ModulusSpec& spec, int steps, int cells, double horizon) {
  if (moments.count() < 1) throw DomainError("holder statistic: no paths");
  const double dt = horizon / steps;
  const double dx = 1.0 / (cells + 1);
  double best = 0.0;
  for (size_t p = 0; p < moments.pairs().size(); ++p) {
    const auto& g = moments.pairs()[p];
    const double t = (g.r1 + 1) * dt;
    const double eps = (g.r2 - g.r1) * dt;
    const double dxy = std::abs(g.j2 - g.j1) * dx;
    const double denom = std::max(eps > 0 ? std::pow(eps, spec.tau) : 0.0, dxy > 0 ? std::pow(dxy, spec.mu) : 0.0);
    if (denom <= 0.0) continue;
    const double m = moments.moment(p);
    if (!std::isfinite(m)) throw NumericalError("holder statistic: moment is not finite");
    best = std::max(best, weight(t, spec.alpha, spec.beta) * std::pow(m, 1.0 / moments.k()) / denom);
  }
  return best;
}

double holder_statistic(const Ensemble& ens, const ModulusSpec& spec) {
  ens.validate();
  const auto paths = usable(ens);
  if (paths.empty()) throw DomainError("holder statistic needs at least one usable path");
  const Trajectory& first = *paths.front();
  PairMoments pm(holder_pairs(first.steps, first.cells()), spec.k);
  for (const auto* p : paths) pm.add(*p);
  return holder_statistic(pm, spec, first.steps, first.cells(), first.horizon);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "n_x,n_t,T,seed,path_index\n";
  out << traj.grid_points << ',' << traj.steps << ',' << std::setprecision(17) << traj.horizon << ','
      << traj.master_seed << ',' << traj.path_index << '\n';
  for (int r = 0; r < traj.steps; ++r) {
    out << traj.time(r);
    for (int i = 0; i <= traj.grid_points; ++i) out << ',' << traj.value_at(r, i);
    out << '\n';
  }
}

namespace {
constexpr char kMagic[8] = {'S', 'H', 'E', 'T', 'R', 'A', 'J', '1'};
}

void write_trajectory_binary(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const std::int32_t nx = traj.grid_points, nt = traj.steps;
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
  out.write(reinterpret_cast<const char*>(&nt), sizeof nt);
  out.write(reinterpret_cast<const char*>(&traj.horizon), sizeof traj.horizon);
  out.write(reinterpret_cast<const char*>(&traj.master_seed), sizeof traj.master_seed);
  out.write(reinterpret_cast<const char*>(&traj.path_index), sizeof traj.path_index);
  const std::int32_t blowup = traj.blowup_row.value_or(-1), stop = traj.stop_row.value_or(-1);
  out.write(reinterpret_cast<const char*>(&blowup), sizeof blowup);
  out.write(reinterpret_cast<const char*>(&stop), sizeof stop);
  out.write(reinterpret_cast<const char*>(traj.initial.data()),
            static_cast<std::streamsize>(traj.initial.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(traj.values.data()),
            static_cast<std::streamsize>(traj.values.size() * sizeof(double)));
}

Trajectory read_trajectory_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw std::runtime_error(path + ": not a trajectory file");
  std::int32_t nx = 0, nt = 0;
  double T = 0;
  std::uint64_t seed = 0;
  std::uint32_t path_index = 0;
  in.read(reinterpret_cast<char*>(&nx), sizeof nx);
  in.read(reinterpret_cast<char*>(&nt), sizeof nt);
  in.read(reinterpret_cast<char*>(&T), sizeof T);
  in.read(reinterpret_cast<char*>(&seed), sizeof seed);
  in.read(reinterpret_cast<char*>(&path_index), sizeof path_index);
  std::int32_t blowup = -1, stop = -1;
  in.read(reinterpret_cast<char*>(&blowup), sizeof blowup);
  in.read(reinterpret_cast<char*>(&stop), sizeof stop);
  Trajectory t = Trajectory::zeros(nx, nt, T);
  t.master_seed = seed;
  t.path_index = path_index;
  in.read(reinterpret_cast<char*>(t.initial.data()), static_cast<std::streamsize>(t.initial.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(t.values.data()), static_cast<std::streamsize>(t.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated trajectory file");
  if (blowup >= 0) t.blowup_row = blowup;
  if (stop >= 0) t.stop_row = stop;
  return t;
}

}  // namespace shelab
