#pragma once

#include <string>
#include <vector>

#include "shelab/kernel.hpp"

namespace shelab {

enum class InitialPreset { zero, sine, constant, indicator, singular, samples };

/// Initial data u0 on [0,1].
///   sine:      amplitude * sin(mode pi x)
///   constant:  amplitude
///   indicator: amplitude on [lower, upper]
///   singular:  amplitude * x^{-1/4} (1 - x), square integrable but unbounded at 0
///   samples:   values on the interior grid, transformed as given
struct InitialCondition {
  InitialPreset preset = InitialPreset::zero;
  double amplitude = 1.0;
  int mode = 1;
  double lower = 0.25;
  double upper = 0.75;
  std::vector<double> samples;

  static InitialCondition zero();
  static InitialCondition sine(int mode, double amplitude = 1.0);
  static InitialCondition constant(double value);
  static InitialCondition indicator(double lower = 0.25, double upper = 0.75, double height = 1.0);
  static InitialCondition singular(double amplitude = 1.0);
  static InitialCondition from_samples(std::vector<double> interior_values);

  /// Pointwise value; not available for sampled data.
  double operator()(double x) const;
  /// Sine coefficients for n = 1..n_x-1; presets other than sine and samples use composite
  /// Gauss-Legendre quadrature resolved at the scale of the highest mode.
  SineCoefficients coefficients(int grid_points) const;
  /// ||u0||_{L^2[0,1]} of the continuum profile (sampled data: of the grid interpolant).
  double l2_norm() const;
  std::string describe() const;

  bool operator==(const InitialCondition&) const = default;
};

const char* preset_name(InitialPreset p);
InitialPreset parse_preset(const std::string& name);

}  // namespace shelab
