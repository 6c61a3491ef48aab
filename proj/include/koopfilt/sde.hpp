#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "koopfilt/lifted_system.hpp"
#include "koopfilt/noise.hpp"
#include "koopfilt/observables.hpp"
#include "koopfilt/polynomial.hpp"

namespace koopfilt {

// Controlled Ito system dx = f(x, u) dt + sum_g g_gamma(x, u) dB_gamma.
// Drift and diffusion callbacks must be pure functions of (x, u).
struct SdeSystem {
  int n = 0;  // state dimension
  int d = 0;  // control dimension
  int r = 0;  // noise channels
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& u)> drift;
  std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>>
      diffusion;  // r columns
};

// Evaluates a PolynomialSystem's drift/diffusion as SdeSystem callbacks
// (autonomous: d = 0).
SdeSystem make_sde(const PolynomialSystem& poly);

struct Trajectory {
  Eigen::VectorXd times;   // steps + 1 entries, uniform spacing
  Eigen::MatrixXd states;  // (steps + 1) x dim
};

using ControlFunction = std::function<Eigen::VectorXd(double t)>;

ControlFunction zero_control(int control_dim);

// One explicit Euler-Maruyama update x + f(x,u) dt + sum_g g_gamma(x,u) dB_g.
// Throws std::invalid_argument on dimension mismatch and NumericError when
// the result is non-finite.
Eigen::VectorXd euler_maruyama_step(const SdeSystem& system, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u, double dt,
                                    const Eigen::VectorXd& dB);

// Integrates `steps` Euler-Maruyama updates from x0, consuming the first
// `steps` rows of `noise`. NumericError from a step carries the step index.
Trajectory simulate_path(const SdeSystem& system, const Eigen::VectorXd& x0,
                         const ControlFunction& control, double dt, std::int64_t steps,
                         const NoisePath& noise);

// Integrates the truth system and the lifted bilinear system side by side on
// the same Brownian increments, the lifted path starting from
// dictionary.lift(x0). The two integrations share no state, so their order
// is immaterial.
std::pair<Trajectory, Trajectory> simulate_coupled(const SdeSystem& truth,
                                                   const LiftedBilinearSystem& lifted,
                                                   const ObservableDictionary& dictionary,
                                                   const Eigen::VectorXd& x0, double dt,
                                                   std::int64_t steps, const NoisePath& noise);

}  // namespace koopfilt
