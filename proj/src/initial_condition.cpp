#include "shelab/initial_condition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

constexpr double kPi = std::numbers::pi;

/// 16-point Gauss-Legendre nodes and weights on [-1, 1].
struct Gauss16 {
  std::array<double, 16> x{}, w{};
  Gauss16() {
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<size_t>(i)] = z;
      w[static_cast<size_t>(i)] = 2.0 / ((1 - z * z) * dp * dp);
    }
  }
};

const Gauss16& gauss16() {
  static const Gauss16 g;
  return g;
}

struct Node {
  double x, w;
};

/// Quadrature nodes on [0,1] for integrands that oscillate like sin(M pi x): panels of width <= 1/(4M),
/// breakpoints at discontinuities, and x = h u^4 on the first panel for the x^{-1/4} singularity.
std::vector<Node> nodes_for(const InitialCondition& u0, int modes) {
  std::vector<double> cuts{0.0, 1.0};
  if (u0.preset == InitialPreset::indicator) {
    cuts.push_back(std::clamp(u0.lower, 0.0, 1.0));
    cuts.push_back(std::clamp(u0.upper, 0.0, 1.0));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double hmax = 1.0 / (4.0 * std::max(modes, 8));
  const auto& g = gauss16();
  std::vector<Node> nodes;
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      const bool substitute = u0.preset == InitialPreset::singular && p == 0 && a == 0.0;
      for (size_t i = 0; i < 16; ++i) {
        const double s = 0.5 * (g.x[i] + 1.0);
        if (substitute) {
          // x = h s^4, dx = 4 h s^3 ds
          nodes.push_back({h * s * s * s * s, 0.5 * g.w[i] * 4.0 * h * s * s * s});
        } else {
          nodes.push_back({lo + h * s, 0.5 * g.w[i] * h});
        }
      }
    }
  }
  return nodes;
}

}  // namespace

InitialCondition InitialCondition::zero() { return InitialCondition{}; }

InitialCondition InitialCondition::sine(int mode, double amplitude) {
  if (mode < 1) throw ConfigError("sine preset needs mode >= 1");
  InitialCondition u;
  u.preset = InitialPreset::sine;
  u.mode = mode;
  u.amplitude = amplitude;
  return u;
}

InitialCondition InitialCondition::constant(double value) {
  InitialCondition u;
  u.preset = InitialPreset::constant;
  u.amplitude = value;
  return u;
}

InitialCondition InitialCondition::indicator(double lower, double upper, double height) {
  if (!(0.0 <= lower && lower < upper && upper <= 1.0)) throw ConfigError("indicator preset needs 0 <= lower < upper <= 1");
  InitialCondition u;
  u.preset = InitialPreset::indicator;
  u.lower = lower;
  u.upper = upper;
  u.amplitude = height;
  return u;
}

InitialCondition InitialCondition::singular(double amplitude) {
  InitialCondition u;
  u.preset = InitialPreset::singular;
  u.amplitude = amplitude;
  return u;
}

InitialCondition InitialCondition::from_samples(std::vector<double> interior_values) {
  InitialCondition u;
  u.preset = InitialPreset::samples;
  u.samples = std::move(interior_values);
  return u;
}

double InitialCondition::operator()(double x) const {
  switch (preset) {
    case InitialPreset::zero: return 0.0;
    case InitialPreset::sine: return amplitude * std::sin(mode * kPi * x);
    case InitialPreset::constant: return amplitude;
    case InitialPreset::indicator: return (x >= lower && x <= upper) ? amplitude : 0.0;
    case InitialPreset::singular: return x > 0.0 ? amplitude * std::pow(x, -0.25) * (1.0 - x) : 0.0;
    case InitialPreset::samples: throw DomainError("sampled initial data has no pointwise continuum value");
  }
  return 0.0;
}

SineCoefficients InitialCondition::coefficients(int grid_points) const {
  const int M = grid_points - 1;
  if (M < 1) throw DomainError("initial condition: need n_x >= 2");
  SineCoefficients c{std::vector<double>(static_cast<size_t>(M), 0.0)};
  switch (preset) {
    case InitialPreset::zero: return c;
    case InitialPreset::sine:
      if (mode > M) throw ConfigError("sine preset mode exceeds the number of grid modes");
      c.coefficients[static_cast<size_t>(mode - 1)] = amplitude;
      return c;
    case InitialPreset::samples: {
      if (static_cast<int>(samples.size()) != M) throw ConfigError("sampled initial data must have n_x - 1 values");
      SineTransform tr(grid_points);
      c.coefficients = tr.forward(samples);
      return c;
    }
    default: break;
  }
  // c_n = 2 int_0^1 u0(x) sin(n pi x) dx, with sin(n theta) by the three-term recurrence.
  for (const auto& node : nodes_for(*this, M)) {
    const double f = 2.0 * node.w * (*this)(node.x);
    const double theta = kPi * node.x;
    const double two_cos = 2.0 * std::cos(theta);
    double s_prev = 0.0, s = std::sin(theta);
    for (int n = 1; n <= M; ++n) {
      c.coefficients[static_cast<size_t>(n - 1)] += f * s;
      const double next = two_cos * s - s_prev;
      s_prev = s;
      s = next;
    }
  }
  return c;
}

double InitialCondition::l2_norm() const {
  switch (preset) {
    case InitialPreset::zero: return 0.0;
    case InitialPreset::sine: return std::abs(amplitude) / std::numbers::sqrt2;
    case InitialPreset::samples: {
      double s = 0.0;
      for (double v : samples) s += v * v;
      return std::sqrt(s / static_cast<double>(samples.size() + 1));
    }
    default: break;
  }
  double s = 0.0;
  for (const auto& node : nodes_for(*this, 64)) {
    const double v = (*this)(node.x);
    s += node.w * v * v;
  }
  return std::sqrt(s);
}

std::string InitialCondition::describe() const {
  std::ostringstream os;
  os << preset_name(preset);
  switch (preset) {
    case InitialPreset::sine: os << "(mode=" << mode << ", amplitude=" << amplitude << ")"; break;
    case InitialPreset::constant: os << "(" << amplitude << ")"; break;
    case InitialPreset::indicator: os << "([" << lower << ", " << upper << "], height=" << amplitude << ")"; break;
    case InitialPreset::singular: os << "(amplitude=" << amplitude << ")"; break;
    case InitialPreset::samples: os << "(" << samples.size() << " values)"; break;
    case InitialPreset::zero: break;
  }
  return os.str();
}

const char* preset_name(InitialPreset p) {
  switch (p) {
    case InitialPreset::zero: return "zero";
    case InitialPreset::sine: return "sine";
    case InitialPreset::constant: return "constant";
    case InitialPreset::indicator: return "indicator";
    case InitialPreset::singular: return "singular";
    case InitialPreset::samples: return "samples";
  }
  return "zero";
}

InitialPreset parse_preset(const std::string& name) {
  for (auto p : {InitialPreset::zero, InitialPreset::sine, InitialPreset::constant, InitialPreset::indicator,
                 InitialPreset::singular, InitialPreset::samples})
    if (name == preset_name(p)) return p;
  throw ConfigError("unknown initial preset '" + name + "'");
}

}  // namespace shelab
