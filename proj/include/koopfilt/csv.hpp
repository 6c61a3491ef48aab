#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "koopfilt/lifted_system.hpp"
#include "koopfilt/lifting.hpp"
#include "koopfilt/sde.hpp"

namespace koopfilt {

// All CSV emitters write '.' decimal separators, LF line endings, and full
// double precision (17 significant digits).

std::string format_double(double value);

// Header "t,s1,...,sk", one row per grid point.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Header "t,zhat1,...,zhatm,P11,...,Pmm"; one row per grid point with the
// mean and the covariance diagonal.
void write_filter_trace_csv(const std::string& path, const Eigen::VectorXd& times,
                            const Eigen::MatrixXd& means, const Eigen::MatrixXd& cov_diagonals);

// Full covariance dump every `stride` grid points: header
// "t,P11,P12,...,Pmm" (row-major flattening).
void write_full_covariance_csv(const std::string& path, const Eigen::VectorXd& times,
                               const std::vector<Eigen::MatrixXd>& covariances, int stride);

// Matrix dump of a lifted system: one CSV block per matrix, preceded by
// '#'-comment metadata naming the state ordering, plus the truncation report
// (dropped monomial, source row, coefficient, target matrix).
void write_matrices_csv(const std::string& path, const LiftedBilinearSystem& system,
                        const std::vector<std::string>& state_names,
                        const TruncationReport& truncation);

}  // namespace koopfilt
