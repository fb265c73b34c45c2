#pragma once

#include <functional>
#include <span>
#include <vector>

namespace shelab {

/// Node of a rule on [a, b], with its distances to both ends kept exact.
struct QuadratureNode {
  double x = 0.0;
  double from_lower = 0.0;  ///< x - a
  double from_upper = 0.0;  ///< b - x
  double weight = 0.0;
};

/// Double-exponential (tanh-sinh) rule on [a, b] with step h = 2^{-level}. Nodes closer to an end
/// than cutoff * (b - a) are dropped; the endpoint distances let integrands with singular or sharply
/// peaked factors at either end be evaluated without cancellation.
std::vector<QuadratureNode> tanh_sinh_nodes(double a, double b, int level, double lower_cutoff = 1e-300,
                                            double upper_cutoff = 1e-300);

/// f(s, b - s) integrated over [a, b] by tanh_sinh_nodes.
double tanh_sinh_integrate(const std::function<double(double, double)>& f, double a, double b, int level);

/// n-point Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  double integrate(const std::function<double(double)>& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// int_a^b |f| with panels split at `breakpoints` (values outside (a, b) are ignored) and at sign
/// changes of f located by bisection between `samples` equispaced probes per panel.
double integrate_abs(const std::function<double(double)>& f, double a, double b, std::vector<double> breakpoints,
                     const GaussLegendre& rule, int samples = 8);

}  // namespace shelab
