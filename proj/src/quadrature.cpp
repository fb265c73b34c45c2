#include "shelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shelab/errors.hpp"

namespace shelab {

std::vector<QuadratureNode> tanh_sinh_nodes(double a, double b, int level, double lower_cutoff, double upper_cutoff) {
  if (!(b > a)) throw DomainError("tanh_sinh_nodes: need b > a");
  if (level < 0 || level > 20) throw DomainError("tanh_sinh_nodes: level out of range");
  const double h = std::ldexp(1.0, -level);
  const double half = 0.5 * (b - a);
  const double len = b - a;
  std::vector<QuadratureNode> nodes;
  auto push = [&](double u) {
    const double v = 0.5 * std::numbers::pi * std::sinh(u);
    const double e = std::exp(-2.0 * std::abs(v));
    // 1 - tanh|v| = 2e / (1 + e), sech^2 v = 4e / (1 + e)^2
    const double near = half * 2.0 * e / (1.0 + e);
    const double far = len - near;
    const double weight = half * h * 0.5 * std::numbers::pi * std::cosh(u) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    QuadratureNode n;
    n.from_lower = v < 0 ? near : far;
    n.from_upper = v < 0 ? far : near;
    if (v == 0.0) n.from_lower = n.from_upper = half;
    n.x = v < 0 ? a + n.from_lower : b - n.from_upper;
    n.weight = weight;
    if (n.from_lower < lower_cutoff * len || n.from_upper < upper_cutoff * len || !(weight > 0.0)) return false;
    nodes.push_back(n);
    return true;
  };
  push(0.0);
  for (int side : {-1, 1}) {
    for (int k = 1;; ++k) {
      if (!push(side * k * h)) break;
    }
  }
  std::sort(nodes.begin(), nodes.end(), [](const auto& p, const auto& q) {
    return p.from_lower < q.from_lower || (p.from_lower == q.from_lower && p.from_upper > q.from_upper);
  });
  return nodes;
}

double tanh_sinh_integrate(const std::function<double(double, double)>& f, double a, double b, int level) {
  double s = 0.0;
  for (const auto& n : tanh_sinh_nodes(a, b, level)) s += n.weight * f(n.x, n.from_upper);
  return s;
}

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw DomainError("GaussLegendre: order must be positive");
  nodes_.resize(static_cast<size_t>(n));
  weights_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes_[static_cast<size_t>(i)] = z;
    weights_[static_cast<size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(c + h * nodes_[i]);
  return h * s;
}

double integrate_abs(const std::function<double(double)>& f, double a, double b, std::vector<double> breakpoints,
                     const GaussLegendre& rule, int samples) {
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::erase_if(breakpoints, [&](double p) { return !(p >= a && p <= b); });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  samples = std::max(samples, 1);

  double total = 0.0;
  std::vector<double> cuts;
  for (size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double lo = breakpoints[p], hi = breakpoints[p + 1];
    if (!(hi > lo)) continue;
    cuts.assign(1, lo);
    // x_prev/f_prev: last probe with a nonzero value; exact zeros become cuts directly.
    double x_prev = lo, f_prev = f(lo);
    for (int k = 1; k <= samples; ++k) {
      const double x = k == samples ? hi : lo + (hi - lo) * k / samples;
      const double fx = f(x);
      if (fx == 0.0) {
        if (k < samples) cuts.push_back(x);
        x_prev = x;
        f_prev = 0.0;
        continue;
      }
      if ((f_prev < 0 && fx > 0) || (f_prev > 0 && fx < 0)) {
        double l = x_prev, r = x, fl = f_prev;
        for (int it = 0; it < 60 && r - l > 1e-15 * (hi - lo); ++it) {
          const double m = 0.5 * (l + r);
          const double fm = f(m);
          if (fm == 0.0) {
            l = r = m;
            break;
          }
          if ((fl < 0) == (fm < 0)) {
            l = m;
            fl = fm;
          } else {
            r = m;
          }
        }
        cuts.push_back(0.5 * (l + r));
      }
      x_prev = x;
      f_prev = fx;
    }
    cuts.push_back(hi);
    for (size_t c = 0; c + 1 < cuts.size(); ++c)
      total += std::abs(rule.integrate(f, cuts[c], cuts[c + 1]));
  }
  return total;
}

}  // namespace shelab
