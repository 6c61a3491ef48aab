#include "koopfilt/filtering.hpp"

#include <stdexcept>

#include "koopfilt/errors.hpp"

namespace koopfilt {

namespace {

constexpr double kEigenvalueFloor = -1e-10;

void check_step_arguments(const LiftedBilinearSystem& lifted, const FilterState& fs,
                          const Eigen::VectorXd& dy, double dt) {
  lifted.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("filter step: dt must be positive");
  if (!(lifted.measurement_noise > 0.0)) {
    throw std::invalid_argument("filter step: measurement noise must be positive");
  }
  if (fs.mean.size() != lifted.m() || fs.cov.rows() != lifted.m() ||
      fs.cov.cols() != lifted.m()) {
    throw std::invalid_argument("filter step: state has wrong dimension");
  }
  if (dy.size() != lifted.p()) {
    throw std::invalid_argument("filter step: observation increment has wrong dimension");
  }
}

}  // namespace

Eigen::MatrixXd symmetrize_and_project(const Eigen::Ref<const Eigen::MatrixXd>& P,
                                       FilterDiagnostics* diag) {
  Eigen::MatrixXd sym = 0.5 * (P + P.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() >= kEigenvalueFloor) {
    return sym;
  }
  if (diag != nullptr) ++diag->projection_events;
  solver.compute(sym);
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  sym = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
  return 0.5 * (sym + sym.transpose());
}

Eigen::MatrixXd expected_bbT(const LiftedBilinearSystem& lifted, const FilterState& fs) {
  lifted.validate();
  const Eigen::Index m = lifted.m();
  if (fs.mean.size() != m || fs.cov.rows() != m || fs.cov.cols() != m) {
    throw std::invalid_argument("expected_bbT: state has wrong dimension");
  }
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index g = 0; g < lifted.noise_channels(); ++g) {
    const Eigen::MatrixXd& D = lifted.noise_linear[g];
    const Eigen::VectorXd& F = lifted.noise_offset[g];
    const Eigen::VectorXd Dz = D * fs.mean;
    total += D * fs.cov * D.transpose();
    total += Dz * Dz.transpose();
    const Eigen::MatrixXd cross = Dz * F.transpose();
    total += cross + cross.transpose();
    total += F * F.transpose();
  }
  return total;
}

Eigen::MatrixXd generalized_riccati_step(const LiftedBilinearSystem& lifted,
                                         const FilterState& fs, double dt,
                                         FilterDiagnostics* diag) {
  const Eigen::MatrixXd drift = lifted.drift_matrix();
  const double inv_r1_sq =
      1.0 / (lifted.measurement_noise * lifted.measurement_noise);
  const Eigen::MatrixXd gain = fs.cov * lifted.measurement.transpose() * inv_r1_sq;
  Eigen::MatrixXd next =
      fs.cov + (drift * fs.cov + fs.cov * drift.transpose() + expected_bbT(lifted, fs) -
                gain * (lifted.measurement * fs.cov)) *
                   dt;
  return symmetrize_and_project(next, diag);
}

namespace {

FilterState bilinear_step(const LiftedBilinearSystem& lifted, const FilterState& fs,
                          const Eigen::VectorXd& dy, double dt, FilterDiagnostics* diag,
                          const char* label) {
  check_step_arguments(lifted, fs, dy, dt);

  const Eigen::MatrixXd drift = lifted.drift_matrix();
  const double inv_r1_sq =
      1.0 / (lifted.measurement_noise * lifted.measurement_noise);
  const Eigen::VectorXd innovation = dy - lifted.measurement * fs.mean * dt;
  const Eigen::MatrixXd gain = fs.cov * lifted.measurement.transpose() * inv_r1_sq;

  FilterState next;
  next.mean = fs.mean + (drift * fs.mean + lifted.drift_offset) * dt + gain * innovation;
  next.cov = generalized_riccati_step(lifted, fs, dt, diag);
  if (!next.mean.allFinite() || !next.cov.allFinite()) {
    throw NumericError(std::string(label) + ": non-finite filter state");
  }
  return next;
}

}  // namespace

FilterState koopman_filter_step(const LiftedBilinearSystem& lifted, const FilterState& fs,
                                const Eigen::VectorXd& dy, double dt,
                                FilterDiagnostics* diag) {
  return bilinear_step(lifted, fs, dy, dt, diag, "koopman_filter_step");
}

FilterState carleman_filter_step(const LiftedBilinearSystem& lifted, const FilterState& fs,
                                 const Eigen::VectorXd& dy, double dt,
                                 FilterDiagnostics* diag) {
  return bilinear_step(lifted, fs, dy, dt, diag, "carleman_filter_step");
}

FilterState second_order_filter_step(const GenericFilterModel& model, const FilterState& fs,
                                     const Eigen::VectorXd& dy, double dt,
                                     FilterDiagnostics* diag) {
  if (!(dt > 0.0)) throw std::invalid_argument("second_order_filter_step: dt must be positive");
  if (!(model.r1 > 0.0)) {
    throw std::invalid_argument("second_order_filter_step: measurement noise must be positive");
  }
  const int m = model.m;
  const int p = model.p;
  if (fs.mean.size() != m || fs.cov.rows() != m || fs.cov.cols() != m || dy.size() != p) {
    throw std::invalid_argument("second_order_filter_step: state has wrong dimension");
  }

  const Eigen::VectorXd& zh = fs.mean;
  const Eigen::MatrixXd& P = fs.cov;
  const double inv_r1_sq = 1.0 / (model.r1 * model.r1);

  // Expected measurement drift with its second-order correction.
  Eigen::VectorXd h_expected = model.measurement(zh);
  if (model.measurement_hessian) {
    for (int c = 0; c < p; ++c) {
      h_expected(c) += 0.5 * (P * model.measurement_hessian(zh, c)).trace();
    }
  }
  const Eigen::VectorXd innovation = dy - h_expected * dt;

  // Mean drift with its second-order correction.
  Eigen::VectorXd a_expected = model.drift(zh);
  if (model.drift_hessian) {
    for (int j = 0; j < m; ++j) {
      a_expected(j) += 0.5 * (P * model.drift_hessian(zh, j)).trace();
    }
  }

  const Eigen::MatrixXd H = model.measurement_jacobian(zh);
  const Eigen::MatrixXd gain = P * H.transpose() * inv_r1_sq;

  FilterState next;
  next.mean = zh + a_expected * dt + gain * innovation;

  const Eigen::MatrixXd A = model.drift_jacobian(zh);
  Eigen::MatrixXd flow = A * P + P * A.transpose() + model.bbT(zh) - gain * (H * P);
  if (model.bbT_hessian) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        flow(i, j) += 0.5 * (P * model.bbT_hessian(zh, i, j)).trace();
      }
    }
  }
  Eigen::MatrixXd cov = P + flow * dt;
  // Innovation-driven covariance correction; identically zero for linear h.
  if (model.measurement_hessian) {
    for (int c = 0; c < p; ++c) {
      cov += (P * model.measurement_hessian(zh, c) * P) * (inv_r1_sq * innovation(c));
    }
  }
  next.cov = symmetrize_and_project(cov, diag);
  if (!next.mean.allFinite() || !next.cov.allFinite()) {
    throw NumericError("second_order_filter_step: non-finite filter state");
  }
  return next;
}

GenericFilterModel wrap_bilinear_as_generic(const LiftedBilinearSystem& lifted) {
  lifted.validate();
  GenericFilterModel model;
  model.m = static_cast<int>(lifted.m());
  model.p = static_cast<int>(lifted.p());
  model.r1 = lifted.measurement_noise;

  const Eigen::MatrixXd drift = lifted.drift_matrix();
  const Eigen::VectorXd offset = lifted.drift_offset;
  const Eigen::MatrixXd C = lifted.measurement;
  const std::vector<Eigen::MatrixXd> D = lifted.noise_linear;
  const std::vector<Eigen::VectorXd> F = lifted.noise_offset;
  const int m = model.m;

  model.drift = [drift, offset](const Eigen::VectorXd& z) {
    return (drift * z + offset).eval();
  };
  model.drift_jacobian = [drift](const Eigen::VectorXd&) { return drift; };
  model.drift_hessian = [m](const Eigen::VectorXd&, int) {
    return Eigen::MatrixXd::Zero(m, m).eval();
  };
  model.bbT = [D, F, m](const Eigen::VectorXd& z) {
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t g = 0; g < D.size(); ++g) {
      const Eigen::VectorXd b = D[g] * z + F[g];
      total += b * b.transpose();
    }
    return total;
  };
  model.bbT_hessian = [D, m](const Eigen::VectorXd&, int i, int j) {
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m, m);
    for (const Eigen::MatrixXd& Dg : D) {
      hess += Dg.row(i).transpose() * Dg.row(j) + Dg.row(j).transpose() * Dg.row(i);
    }
    return hess;
  };
  model.measurement = [C](const Eigen::VectorXd& z) { return (C * z).eval(); };
  model.measurement_jacobian = [C](const Eigen::VectorXd&) { return C; };
  model.measurement_hessian = [m](const Eigen::VectorXd&, int) {
    return Eigen::MatrixXd::Zero(m, m).eval();
  };
  return model;
}

}  // namespace koopfilt
