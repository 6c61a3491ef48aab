#include "koopfilt/sde.hpp"

#include <stdexcept>
#include <string>

#include "koopfilt/errors.hpp"

namespace koopfilt {

SdeSystem make_sde(const PolynomialSystem& poly) {
  poly.validate();
  SdeSystem sys;
  sys.n = poly.n;
  sys.d = 0;
  sys.r = poly.r;
  const std::vector<Polynomial> drift = poly.drift;
  const int n = poly.n;
  sys.drift = [drift, n](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f(i) = drift[i](x);
    return f;
  };
  for (const auto& column : poly.diffusion) {
    sys.diffusion.push_back([column, n](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
      Eigen::VectorXd g(n);
      for (int i = 0; i < n; ++i) g(i) = column[i](x);
      return g;
    });
  }
  return sys;
}

ControlFunction zero_control(int control_dim) {
  return [control_dim](double) { return Eigen::VectorXd::Zero(control_dim).eval(); };
}

Eigen::VectorXd euler_maruyama_step(const SdeSystem& system, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u, double dt,
                                    const Eigen::VectorXd& dB) {
  if (x.size() != system.n) {
    throw std::invalid_argument("euler_maruyama_step: state has wrong dimension");
  }
  if (u.size() != system.d) {
    throw std::invalid_argument("euler_maruyama_step: control has wrong dimension");
  }
  if (dB.size() != system.r) {
    throw std::invalid_argument("euler_maruyama_step: noise increment has wrong dimension");
  }

  Eigen::VectorXd next = x + system.drift(x, u) * dt;
  for (int g = 0; g < system.r; ++g) {
    next += system.diffusion[g](x, u) * dB(g);
  }
  if (next.size() != system.n) {
    throw std::invalid_argument("euler_maruyama_step: drift/diffusion output has wrong dimension");
  }
  if (!next.allFinite()) {
    throw NumericError("euler_maruyama_step: non-finite state");
  }
  return next;
}

Trajectory simulate_path(const SdeSystem& system, const Eigen::VectorXd& x0,
                         const ControlFunction& control, double dt, std::int64_t steps,
                         const NoisePath& noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_path: dt must be positive");
  if (steps < 0) throw std::invalid_argument("simulate_path: steps must be nonnegative");
  if (noise.dims != system.r) {
    throw std::invalid_argument("simulate_path: noise has wrong channel count");
  }
  if (noise.steps < steps) {
    throw std::invalid_argument("simulate_path: noise path is too short");
  }

  Trajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(steps + 1, system.n);
  traj.states.row(0) = x0.transpose();
  Eigen::VectorXd x = x0;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    traj.times(k) = t;
    try {
      x = euler_maruyama_step(system, x, control(t), dt, noise.increments.row(k).transpose());
    } catch (const NumericError& err) {
      throw NumericError(err.what(), static_cast<long>(k));
    }
    traj.states.row(k + 1) = x.transpose();
  }
  traj.times(steps) = static_cast<double>(steps) * dt;
  return traj;
}

std::pair<Trajectory, Trajectory> simulate_coupled(const SdeSystem& truth,
                                                   const LiftedBilinearSystem& lifted,
                                                   const ObservableDictionary& dictionary,
                                                   const Eigen::VectorXd& x0, double dt,
                                                   std::int64_t steps, const NoisePath& noise) {
  lifted.validate();
  if (dictionary.size() != lifted.m()) {
    throw std::invalid_argument("simulate_coupled: dictionary size does not match lifted state");
  }
  if (noise.dims != truth.r || lifted.noise_channels() != truth.r) {
    throw std::invalid_argument("simulate_coupled: noise channel mismatch");
  }

  Trajectory truth_traj = simulate_path(truth, x0, zero_control(truth.d), dt, steps, noise);

  const Eigen::Index m = lifted.m();
  const Eigen::MatrixXd drift = lifted.drift_matrix();
  Trajectory lifted_traj;
  lifted_traj.times = truth_traj.times;
  lifted_traj.states.resize(steps + 1, m);
  Eigen::VectorXd z = dictionary.lift(x0);
  lifted_traj.states.row(0) = z.transpose();
  for (std::int64_t k = 0; k < steps; ++k) {
    Eigen::VectorXd next = z + (drift * z + lifted.drift_offset) * dt;
    for (Eigen::Index g = 0; g < lifted.noise_channels(); ++g) {
      next += (lifted.noise_linear[g] * z + lifted.noise_offset[g]) * noise.increments(k, g);
    }
    if (!next.allFinite()) {
      throw NumericError("simulate_coupled: non-finite lifted state", static_cast<long>(k));
    }
    z = std::move(next);
    lifted_traj.states.row(k + 1) = z.transpose();
  }
  return {std::move(truth_traj), std::move(lifted_traj)};
}

}  // namespace koopfilt
