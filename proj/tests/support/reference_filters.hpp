#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "koopfilt/filtering.hpp"
#include "koopfilt/lifted_system.hpp"

namespace test_support {

// Independent Kalman-Bucy Euler update written with explicit index loops so
// it shares no code path with the library kernels.
inline void kalman_bucy_reference_step(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                                       const Eigen::MatrixXd& C, double r1,
                                       const Eigen::VectorXd& dy, double dt,
                                       Eigen::VectorXd* mean, Eigen::MatrixXd* cov) {
  const int m = static_cast<int>(mean->size());
  const int p = static_cast<int>(C.rows());
  const double inv_r1_sq = 1.0 / (r1 * r1);
  const Eigen::VectorXd& zh = *mean;
  const Eigen::MatrixXd& P = *cov;

  Eigen::VectorXd innovation(p);
  for (int c = 0; c < p; ++c) {
    double predicted = 0.0;
    for (int k = 0; k < m; ++k) predicted += C(c, k) * zh(k);
    innovation(c) = dy(c) - predicted * dt;
  }

  Eigen::VectorXd next_mean(m);
  for (int i = 0; i < m; ++i) {
    double drift = 0.0;
    for (int k = 0; k < m; ++k) drift += A(i, k) * zh(k);
    double gain = 0.0;
    for (int c = 0; c < p; ++c) {
      double pct = 0.0;
      for (int k = 0; k < m; ++k) pct += P(i, k) * C(c, k);
      gain += pct * inv_r1_sq * innovation(c);
    }
    next_mean(i) = zh(i) + drift * dt + gain;
  }

  Eigen::MatrixXd next_cov(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double ap = 0.0, pa = 0.0;
      for (int k = 0; k < m; ++k) {
        ap += A(i, k) * P(k, j);
        pa += P(i, k) * A(j, k);
      }
      double gain = 0.0;
      for (int c = 0; c < p; ++c) {
        double pci = 0.0, pcj = 0.0;
        for (int k = 0; k < m; ++k) {
          pci += P(i, k) * C(c, k);
          pcj += P(j, k) * C(c, k);
        }
        gain += pci * inv_r1_sq * pcj;
      }
      next_cov(i, j) = P(i, j) + (ap + pa + Q(i, j) - gain) * dt;
    }
  }
  *mean = next_mean;
  *cov = 0.5 * (next_cov + next_cov.transpose());
}

// Loop-based implementation of the second-order filter update, kept naive on
// purpose; tests compare the library's vectorized step against it.
inline koopfilt::FilterState second_order_reference_step(
    const koopfilt::GenericFilterModel& model, const koopfilt::FilterState& fs,
    const Eigen::VectorXd& dy, double dt) {
  const int m = model.m;
  const int p = model.p;
  const double inv_r1_sq = 1.0 / (model.r1 * model.r1);
  const Eigen::VectorXd& zh = fs.mean;
  const Eigen::MatrixXd& P = fs.cov;

  const Eigen::MatrixXd H = model.measurement_jacobian(zh);
  const Eigen::MatrixXd A = model.drift_jacobian(zh);
  const Eigen::MatrixXd bbT = model.bbT(zh);

  Eigen::VectorXd h_expected = model.measurement(zh);
  if (model.measurement_hessian) {
    for (int c = 0; c < p; ++c) {
      const Eigen::MatrixXd hess = model.measurement_hessian(zh, c);
      double corr = 0.0;
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) corr += P(a, b) * hess(a, b);
      }
      h_expected(c) += 0.5 * corr;
    }
  }
  Eigen::VectorXd innovation(p);
  for (int c = 0; c < p; ++c) innovation(c) = dy(c) - h_expected(c) * dt;

  Eigen::VectorXd next_mean(m);
  for (int i = 0; i < m; ++i) {
    double drift = model.drift(zh)(i);
    if (model.drift_hessian) {
      const Eigen::MatrixXd hess = model.drift_hessian(zh, i);
      double corr = 0.0;
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) corr += P(a, b) * hess(a, b);
      }
      drift += 0.5 * corr;
    }
    double gain = 0.0;
    for (int c = 0; c < p; ++c) {
      double pht = 0.0;
      for (int k = 0; k < m; ++k) pht += P(i, k) * H(c, k);
      gain += pht * inv_r1_sq * innovation(c);
    }
    next_mean(i) = zh(i) + drift * dt + gain;
  }

  Eigen::MatrixXd next_cov(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double ap = 0.0, pa = 0.0;
      for (int k = 0; k < m; ++k) {
        ap += P(i, k) * A(j, k);
        pa += P(j, k) * A(i, k);
      }
      double second = 0.0;
      if (model.bbT_hessian) {
        const Eigen::MatrixXd hess = model.bbT_hessian(zh, i, j);
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) second += P(a, b) * hess(a, b);
        }
        second *= 0.5;
      }
      double gain = 0.0;
      for (int c = 0; c < p; ++c) {
        double pci = 0.0, pcj = 0.0;
        for (int k = 0; k < m; ++k) {
          pci += P(i, k) * H(c, k);
          pcj += P(j, k) * H(c, k);
        }
        gain += pci * inv_r1_sq * pcj;
      }
      double correction = 0.0;
      if (model.measurement_hessian) {
        for (int c = 0; c < p; ++c) {
          const Eigen::MatrixXd hess = model.measurement_hessian(zh, c);
          double php = 0.0;
          for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) php += P(i, a) * hess(a, b) * P(b, j);
          }
          correction += php * inv_r1_sq * innovation(c);
        }
      }
      next_cov(i, j) = P(i, j) + (ap + pa + bbT(i, j) + second - gain) * dt + correction;
    }
  }

  koopfilt::FilterState next;
  next.mean = next_mean;
  next.cov = 0.5 * (next_cov + next_cov.transpose());
  return next;
}

// Deterministic random inputs for tests.
struct TestRng {
  std::mt19937_64 engine;
  explicit TestRng(std::uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }

  Eigen::VectorXd vector(int n, double lo = -1.0, double hi = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Eigen::MatrixXd matrix(int rows, int cols, double lo = -1.0, double hi = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    }
    return m;
  }
  // Random PSD matrix M M^T (plus optional ridge).
  Eigen::MatrixXd psd(int n, double ridge = 0.0) {
    const Eigen::MatrixXd m = matrix(n, n);
    return m * m.transpose() + ridge * Eigen::MatrixXd::Identity(n, n);
  }
};

// Random bilinear system with entries in [-1, 1].
inline koopfilt::LiftedBilinearSystem random_bilinear(TestRng* rng, int m, int r, int p) {
  koopfilt::LiftedBilinearSystem sys = koopfilt::LiftedBilinearSystem::zero(m, r, p);
  sys.drift_linear = rng->matrix(m, m);
  sys.drift_ito = rng->matrix(m, m);
  sys.drift_offset = rng->vector(m);
  for (int g = 0; g < r; ++g) {
    sys.noise_linear[g] = rng->matrix(m, m);
    sys.noise_offset[g] = rng->vector(m);
  }
  sys.measurement = rng->matrix(p, m);
  sys.measurement_noise = rng->uniform(0.2, 1.5);
  return sys;
}

}  // namespace test_support
