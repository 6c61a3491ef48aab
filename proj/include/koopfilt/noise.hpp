#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace koopfilt {

// Brownian increments on a uniform grid. Entry (k, g) is the increment of
// channel g over [t_k, t_k + dt], drawn i.i.d. N(0, dt).
//
// Generation scheme (fixed so that a reimplementation can match the
// statistics; bit-exactness is only promised within one build):
//   * counter-based PRNG: draw i of stream `seed` is
//       splitmix64_finalize(seed + (i + 1) * 0x9e3779b97f4a7c15)
//   * the 64-bit word is mapped to a uniform u in (0, 1] via
//       u = ((word >> 11) + 1) * 2^-53
//   * consecutive uniform pairs (2p, 2p+1) feed Box-Muller:
//       n_{2p}   = sqrt(-2 ln u1) * cos(2 pi u2)
//       n_{2p+1} = sqrt(-2 ln u1) * sin(2 pi u2)
//   * increments are filled row-major and scaled by sqrt(dt).
struct NoisePath {
  double dt = 0.0;
  std::int64_t steps = 0;
  int dims = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd increments;  // steps x dims
};

// Standard normal draw `index` of the counter-based stream `seed`.
double standard_normal_draw(std::uint64_t seed, std::uint64_t index);

// Samples a NoisePath. Throws std::invalid_argument for dt <= 0 or negative
// steps/dims. Regenerating with the same arguments is bit-identical.
NoisePath generate_noise(std::uint64_t seed, double dt, std::int64_t steps, int dims);

}  // namespace koopfilt
