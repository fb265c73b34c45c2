#include "shelab/noise.hpp"

#include <cmath>
#include <numbers>

#include "shelab/errors.hpp"

namespace shelab {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

/// Uniform in (0, 1] from 53 bits.
inline double open_unit(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(a) << 32) | b) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::array<double, 2> counter_normal_pair(std::uint64_t seed, PhiloxCounter counter) {
  const PhiloxKey key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto r = philox4x32(counter, key);
  const double u1 = open_unit(r[0], r[1]);
  const double u2 = open_unit(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint32_t path_index, int grid_points, double dt,
                         double variance_scale)
    : seed_(master_seed), path_(path_index), grid_points_(grid_points), dt_(dt) {
  if (grid_points < 2) throw DomainError("noise: need n_x >= 2");
  if (!(dt > 0.0)) throw DomainError("noise: dt must be > 0");
  if (!(variance_scale > 0.0)) throw DomainError("noise: variance scale must be > 0");
  variance_ = variance_scale * dt / dx();
  stddev_ = std::sqrt(variance_);
}

void NoiseStream::fill_increment(std::uint32_t step, std::span<double> out) const {
  const auto cells = static_cast<size_t>(grid_points_ - 1);
  if (out.size() != cells) throw DomainError("noise: output size must be n_x - 1");
  for (size_t j = 0; j < cells; j += 2) {
    // Counter word 3 is a stream tag; 0 is reserved for the driving noise.
    const auto pair = counter_normal_pair(seed_, {static_cast<std::uint32_t>(j / 2), step, path_, 0u});
    out[j] = stddev_ * pair[0];
    if (j + 1 < cells) out[j + 1] = stddev_ * pair[1];
  }
}

std::vector<double> NoiseStream::sample_increment(std::uint32_t step) const {
  std::vector<double> out(static_cast<size_t>(grid_points_ - 1));
  fill_increment(step, out);
  return out;
}

std::vector<double> sample_increment(const NoiseStream& stream, std::uint32_t step) {
  return stream.sample_increment(step);
}

}  // namespace shelab
