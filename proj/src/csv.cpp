#include "koopfilt/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace koopfilt {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void write_matrix_block(std::ofstream& out, const std::string& name,
                        const Eigen::MatrixXd& matrix) {
  out << "# matrix " << name << " (" << matrix.rows() << " x " << matrix.cols() << ")\n";
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

void write_vector_block(std::ofstream& out, const std::string& name,
                        const Eigen::VectorXd& vector) {
  out << "# vector " << name << " (" << vector.size() << ")\n";
  for (Eigen::Index i = 0; i < vector.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(vector(i));
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_for_write(path);
  out << 't';
  for (Eigen::Index j = 0; j < traj.states.cols(); ++j) out << ",s" << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < traj.states.rows(); ++i) {
    out << format_double(traj.times(i));
    for (Eigen::Index j = 0; j < traj.states.cols(); ++j) {
      out << ',' << format_double(traj.states(i, j));
    }
    out << '\n';
  }
}

void write_filter_trace_csv(const std::string& path, const Eigen::VectorXd& times,
                            const Eigen::MatrixXd& means, const Eigen::MatrixXd& cov_diagonals) {
  if (means.rows() != times.size() || cov_diagonals.rows() != times.size() ||
      means.cols() != cov_diagonals.cols()) {
    throw std::invalid_argument("write_filter_trace_csv: shape mismatch");
  }
  std::ofstream out = open_for_write(path);
  out << 't';
  for (Eigen::Index j = 0; j < means.cols(); ++j) out << ",zhat" << (j + 1);
  for (Eigen::Index j = 0; j < means.cols(); ++j) out << ",P" << (j + 1) << (j + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    out << format_double(times(i));
    for (Eigen::Index j = 0; j < means.cols(); ++j) out << ',' << format_double(means(i, j));
    for (Eigen::Index j = 0; j < cov_diagonals.cols(); ++j) {
      out << ',' << format_double(cov_diagonals(i, j));
    }
    out << '\n';
  }
}

void write_full_covariance_csv(const std::string& path, const Eigen::VectorXd& times,
                               const std::vector<Eigen::MatrixXd>& covariances, int stride) {
  if (stride < 1) throw std::invalid_argument("write_full_covariance_csv: stride must be >= 1");
  if (times.size() != static_cast<Eigen::Index>(covariances.size())) {
    throw std::invalid_argument("write_full_covariance_csv: shape mismatch");
  }
  std::ofstream out = open_for_write(path);
  const Eigen::Index m = covariances.empty() ? 0 : covariances.front().rows();
  out << 't';
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out << ",P" << (i + 1) << (j + 1);
  }
  out << '\n';
  for (Eigen::Index k = 0; k < times.size(); k += stride) {
    out << format_double(times(k));
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) out << ',' << format_double(covariances[k](i, j));
    }
    out << '\n';
  }
}

void write_matrices_csv(const std::string& path, const LiftedBilinearSystem& system,
                        const std::vector<std::string>& state_names,
                        const TruncationReport& truncation) {
  std::ofstream out = open_for_write(path);
  out << "# lifted bilinear system, " << system.m() << " states, " << system.noise_channels()
      << " noise channels\n";
  out << "# state ordering:";
  for (std::size_t j = 0; j < state_names.size(); ++j) {
    out << (j == 0 ? " " : ", ") << "z" << (j + 1) << "=" << state_names[j];
  }
  out << '\n';
  write_matrix_block(out, "Lambda_f", system.drift_linear);
  write_matrix_block(out, "Lambda_b", system.drift_ito);
  write_vector_block(out, "G", system.drift_offset);
  for (Eigen::Index g = 0; g < system.noise_channels(); ++g) {
    write_matrix_block(out, "D" + std::to_string(g + 1), system.noise_linear[g]);
    write_vector_block(out, "F" + std::to_string(g + 1), system.noise_offset[g]);
  }
  if (system.p() > 0) {
    write_matrix_block(out, "C", system.measurement);
    out << "# scalar r1\n" << format_double(system.measurement_noise) << '\n';
  }
  if (truncation.empty()) {
    out << "# truncation: none\n";
  } else {
    out << "# truncation: dropped monomial, source row, coefficient, target\n";
    for (const TruncationRecord& record : truncation.dropped) {
      out << "# dropped " << monomial_name(record.dropped) << ", row " << (record.source_row + 1)
          << ", coefficient " << format_double(record.coefficient) << ", " << record.target
          << '\n';
    }
  }
}

}  // namespace koopfilt
