#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace koopfilt {

// Bilinear lifted system
//   dz = (drift_linear + drift_ito) z dt + drift_offset dt
//        + sum_g (noise_linear[g] z + noise_offset[g]) dB_g
// with linear measurement dy = measurement * z dt + measurement_noise * deta.
//
// drift_linear carries the drift-field contribution and drift_ito the
// second-order Ito correction; builders that only know the combined matrix
// store it in drift_linear and leave drift_ito zero. drift_offset collects
// the constant terms the Ito rule produces on monomial observables.
struct LiftedBilinearSystem {
  Eigen::MatrixXd drift_linear;               // m x m
  Eigen::MatrixXd drift_ito;                  // m x m
  Eigen::VectorXd drift_offset;               // m
  std::vector<Eigen::MatrixXd> noise_linear;  // r entries, m x m
  std::vector<Eigen::VectorXd> noise_offset;  // r entries, m
  Eigen::MatrixXd measurement;                // p x m (p may be 0)
  double measurement_noise = 0.0;             // positive scalar

  Eigen::Index m() const { return drift_linear.rows(); }
  Eigen::Index noise_channels() const { return static_cast<Eigen::Index>(noise_linear.size()); }
  Eigen::Index p() const { return measurement.rows(); }

  Eigen::MatrixXd drift_matrix() const { return drift_linear + drift_ito; }

  static LiftedBilinearSystem zero(int m, int r, int p) {
    LiftedBilinearSystem sys;
    sys.drift_linear = Eigen::MatrixXd::Zero(m, m);
    sys.drift_ito = Eigen::MatrixXd::Zero(m, m);
    sys.drift_offset = Eigen::VectorXd::Zero(m);
    sys.noise_linear.assign(r, Eigen::MatrixXd::Zero(m, m));
    sys.noise_offset.assign(r, Eigen::VectorXd::Zero(m));
    sys.measurement = Eigen::MatrixXd::Zero(p, m);
    return sys;
  }

  void validate() const {
    const Eigen::Index dim = m();
    if (dim < 1) throw std::invalid_argument("LiftedBilinearSystem: empty state");
    if (drift_linear.cols() != dim || drift_ito.rows() != dim || drift_ito.cols() != dim ||
        drift_offset.size() != dim) {
      throw std::invalid_argument("LiftedBilinearSystem: drift shape mismatch");
    }
    if (noise_offset.size() != noise_linear.size()) {
      throw std::invalid_argument("LiftedBilinearSystem: noise channel count mismatch");
    }
    for (std::size_t g = 0; g < noise_linear.size(); ++g) {
      if (noise_linear[g].rows() != dim || noise_linear[g].cols() != dim ||
          noise_offset[g].size() != dim) {
        throw std::invalid_argument("LiftedBilinearSystem: noise shape mismatch");
      }
    }
    if (measurement.size() > 0 && measurement.cols() != dim) {
      throw std::invalid_argument("LiftedBilinearSystem: measurement shape mismatch");
    }
    if (p() > 0 && !(measurement_noise > 0.0)) {
      throw std::invalid_argument("LiftedBilinearSystem: measurement noise must be positive");
    }
  }
};

}  // namespace koopfilt
