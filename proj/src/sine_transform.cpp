#include "shelab/sine_transform.hpp"

#include <fftw3.h>

#include <mutex>
#include <string>

#include "shelab/errors.hpp"

namespace shelab {
namespace {
// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SineTransform::Plan {
  fftw_plan plan = nullptr;
  int n = 0;
  explicit Plan(int size) : n(size) {
    std::vector<double> scratch(static_cast<size_t>(size), 0.0);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_r2r_1d(size, scratch.data(), scratch.data(), FFTW_RODFT00,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw NumericalError("fftw: failed to plan sine transform of size " + std::to_string(size));
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute(const double* in, double* out) const {
    // RODFT00 takes a non-const input pointer but does not write it in out-of-place mode.
    fftw_execute_r2r(plan, const_cast<double*>(in), out);
  }
};

SineTransform::SineTransform(int grid_points) : grid_points_(grid_points) {
  if (grid_points < 2) throw DomainError("sine transform needs n_x >= 2");
  plan_ = std::make_shared<const Plan>(grid_points - 1);
}

void SineTransform::forward(std::span<const double> values, std::span<double> coefficients) const {
  const auto n = static_cast<size_t>(size());
  if (values.size() != n || coefficients.size() != n)
    throw DomainError("sine transform: expected " + std::to_string(n) + " interior values");
  if (values.data() == coefficients.data()) {
    std::vector<double> tmp(values.begin(), values.end());
    plan_->execute(tmp.data(), coefficients.data());
  } else {
    plan_->execute(values.data(), coefficients.data());
  }
  const double scale = 1.0 / grid_points_;
  for (auto& c : coefficients) c *= scale;
}

void SineTransform::inverse(std::span<const double> coefficients, std::span<double> values) const {
  const auto n = static_cast<size_t>(size());
  if (values.size() != n || coefficients.size() != n)
    throw DomainError("sine transform: expected " + std::to_string(n) + " coefficients");
  if (values.data() == coefficients.data()) {
    std::vector<double> tmp(coefficients.begin(), coefficients.end());
    plan_->execute(tmp.data(), values.data());
  } else {
    plan_->execute(coefficients.data(), values.data());
  }
  for (auto& v : values) v *= 0.5;
}

std::vector<double> SineTransform::forward(std::span<const double> values) const {
  std::vector<double> out(static_cast<size_t>(size()));
  forward(values, out);
  return out;
}

std::vector<double> SineTransform::inverse(std::span<const double> coefficients) const {
  std::vector<double> out(static_cast<size_t>(size()));
  inverse(coefficients, out);
  return out;
}

}  // namespace shelab
