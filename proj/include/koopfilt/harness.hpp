#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "koopfilt/benchmark.hpp"
#include "koopfilt/lifting.hpp"
#include "koopfilt/polynomial.hpp"
#include "koopfilt/sde.hpp"

namespace koopfilt {

enum class LiftingKind { kKoopmanBenchmark, kKoopmanGeneric, kCarleman };

struct LiftingSelector {
  LiftingKind kind = LiftingKind::kKoopmanBenchmark;
  int order = 2;  // dictionary degree for the generic/Carleman liftings
  std::string label() const;
};

// Accepts "koopman", "koopman-paper", "koopman-generic[:N]", "carleman:N"
// and "carleman-N".
LiftingSelector parse_lifting(const std::string& text);

enum class FilterChoice { kKoopman, kCarleman, kBoth };

// Flat key=value experiment description. Missing keys fall back to the
// "paper-s4" preset defaults (a=0.5, b=0.5, r1=0.5, x0=(0.1,0.1), x01=-1,
// x02=1, identity initial covariance).
//
// Recognized keys:
//   preset            preset name ("paper-s4")
//   system            "preset" or "inline"; inline systems are described by
//   state_dim, noise_dim, drift.<i>, diffusion.<g>.<i>, measurement.<c>
//                     (polynomials in x1..xn, e.g. "drift.1 = -x1 + x1*x2")
//   x0                comma-separated initial state
//   a, b, r1, x01, x02    preset parameters
//   lifting           koopman | koopman-generic[:N] | carleman:N
//   filter            koopman | carleman | both
//   mode              verbatim | ito
//   noise_coupling    shared | independent
//   dt, horizon       time grid
//   num_runs, base_seed   Monte Carlo runs; run k uses seed base_seed + k
//   out_dir           output directory
//   cov_stride        full-covariance dump stride (0 disables)
struct ExperimentConfig {
  std::string preset = "paper-s4";
  bool inline_system = false;
  PolynomialSystem system;  // used when inline_system
  Eigen::VectorXd x0 = Eigen::Vector2d(0.1, 0.1);
  BenchmarkParams params;
  LiftingSelector lifting;
  FilterChoice filter = FilterChoice::kBoth;
  DriftConvention mode = DriftConvention::kVerbatim;
  NoiseCoupling coupling = NoiseCoupling::kShared;
  double dt = 1e-3;
  double horizon = 5.0;
  int num_runs = 1;
  std::uint64_t base_seed = 1;
  std::string out_dir = ".";
  int cov_stride = 0;

  // Throws std::invalid_argument on invariant violations (num_runs >= 1,
  // dt > 0, horizon > 0, dt <= horizon, consistent inline system).
  void validate() const;
};

// Parses the flat key=value format ('#' starts a comment). Malformed lines
// and unknown keys throw std::invalid_argument naming the line or the keys;
// the parsed config is validated before it is returned.
ExperimentConfig parse_config(const std::string& text);

struct RunRecord {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::vector<double> rmse;  // tracked lifted estimate vs truth, per state
  // Leading diagonals of the method's own covariance (its P11/P22 plot).
  double p11_final = 0.0;
  double p22_final = 0.0;
  double p11_min = 0.0, p11_max = 0.0;
  double p22_min = 0.0, p22_max = 0.0;
  double wall_ms = 0.0;  // filter loop only, I/O and truth simulation excluded
  long projection_events = 0;
};

struct MethodReport {
  std::string method;
  int states = 0;  // lifted state dimension
  std::vector<RunRecord> runs;
  double wall_mean_ms = 0.0;
  double wall_std_ms = 0.0;
  // Mean over the time grid of the across-run variance of the P11/P22
  // traces: how much the variance trajectories scatter between seeds.
  double p11_fluctuation = 0.0;
  double p22_fluctuation = 0.0;
};

struct ExperimentReport {
  std::vector<MethodReport> methods;
  std::string summary() const;
};

// Square root of the time-averaged squared difference between selected
// columns of two trajectories on a shared grid; one value per column pair.
std::vector<double> compute_rmse(const Trajectory& truth, const Trajectory& estimate,
                                 const std::vector<int>& truth_cols,
                                 const std::vector<int>& estimate_cols);

// Subcommand drivers. All of them create out_dir if needed.

// truth.csv + lifted.csv: one coupled truth/lifted simulation on the
// configured lifting, seeded with base_seed.
void run_simulate(const ExperimentConfig& cfg);

// filter_<label>.csv (and filter_<label>_cov.csv when cov_stride > 0): one
// filter run on the lifting selected by cfg.lifting.
void run_filter(const ExperimentConfig& cfg);

// report.csv + timing.csv over num_runs seeded runs. With filter = both the
// Koopman and Carleman filters see identical truth paths and observations
// per run. report.csv carries only deterministic fields; per-run wall clock
// goes to timing.csv.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// matrices_<label>.csv: generator matrices with ordering metadata and the
// truncation report.
void run_matrices(const ExperimentConfig& cfg);

}  // namespace koopfilt
