#include "koopfilt/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace koopfilt {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1]; never 0, so log() below is finite.
double to_unit(std::uint64_t word) {
  return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

void box_muller(std::uint64_t seed, std::uint64_t pair, double* n0, double* n1) {
  const double u1 = to_unit(splitmix64_at(seed, 2 * pair));
  const double u2 = to_unit(splitmix64_at(seed, 2 * pair + 1));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  *n0 = radius * std::cos(angle);
  *n1 = radius * std::sin(angle);
}

}  // namespace

double standard_normal_draw(std::uint64_t seed, std::uint64_t index) {
  double n0 = 0.0, n1 = 0.0;
  box_muller(seed, index / 2, &n0, &n1);
  return (index % 2 == 0) ? n0 : n1;
}

NoisePath generate_noise(std::uint64_t seed, double dt, std::int64_t steps, int dims) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("generate_noise: dt must be positive, got " +
                                std::to_string(dt));
  }
  if (steps < 0 || dims < 0) {
    throw std::invalid_argument("generate_noise: steps and dims must be nonnegative");
  }

  NoisePath path;
  path.dt = dt;
  path.steps = steps;
  path.dims = dims;
  path.seed = seed;
  path.increments.resize(steps, dims);

  const double scale = std::sqrt(dt);
  const std::int64_t total = steps * dims;
  for (std::int64_t k = 0; k < total; k += 2) {
    double n0 = 0.0, n1 = 0.0;
    box_muller(seed, static_cast<std::uint64_t>(k) / 2, &n0, &n1);
    path.increments(k / dims, k % dims) = scale * n0;
    if (k + 1 < total) {
      path.increments((k + 1) / dims, (k + 1) % dims) = scale * n1;
    }
  }
  return path;
}

}  // namespace koopfilt
