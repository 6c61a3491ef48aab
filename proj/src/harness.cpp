#include "koopfilt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "koopfilt/csv.hpp"
#include "koopfilt/filtering.hpp"
#include "koopfilt/noise.hpp"

namespace koopfilt {

namespace {

// Observation noise stream of run seed s is stream s + this offset.
constexpr std::uint64_t kObservationSeedOffset = 0x9e3779b9ULL;

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

std::string LiftingSelector::label() const {
  switch (kind) {
    case LiftingKind::kKoopmanBenchmark:
      return "koopman";
    case LiftingKind::kKoopmanGeneric:
      return "koopman-generic" + std::to_string(order);
    case LiftingKind::kCarleman:
      return "carleman" + std::to_string(order);
  }
  return "unknown";
}

LiftingSelector parse_lifting(const std::string& text) {
  const std::string value = trim(text);
  LiftingSelector selector;
  auto with_order = [&value](const std::string& prefix, int fallback) {
    if (value.size() <= prefix.size()) return fallback;
    const char sep = value[prefix.size()];
    if (sep != ':' && sep != '-') {
      throw std::invalid_argument("bad lifting selector '" + value + "'");
    }
    const int order = std::stoi(value.substr(prefix.size() + 1));
    if (order < 1) throw std::invalid_argument("lifting order must be >= 1");
    return order;
  };
  if (value == "koopman" || value == "koopman-paper") {
    selector.kind = LiftingKind::kKoopmanBenchmark;
  } else if (value.rfind("koopman-generic", 0) == 0) {
    selector.kind = LiftingKind::kKoopmanGeneric;
    selector.order = with_order("koopman-generic", 2);
  } else if (value.rfind("carleman", 0) == 0) {
    selector.kind = LiftingKind::kCarleman;
    selector.order = with_order("carleman", 2);
  } else {
    throw std::invalid_argument("bad lifting selector '" + value +
                                "' (expected koopman, koopman-generic[:N] or carleman:N)");
  }
  return selector;
}

namespace {

void check_config(const ExperimentConfig& cfg, bool allow_zero_horizon) {
  if (cfg.num_runs < 1) throw std::invalid_argument("config: num_runs must be >= 1");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
  if (allow_zero_horizon && cfg.horizon == 0.0) {
    // A zero-length experiment is permitted when driven programmatically.
  } else {
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
    if (cfg.dt > cfg.horizon) throw std::invalid_argument("config: dt must not exceed horizon");
  }
  if (cfg.lifting.order < 1) throw std::invalid_argument("config: lifting order must be >= 1");
  if (cfg.cov_stride < 0) throw std::invalid_argument("config: cov_stride must be >= 0");
  if (cfg.inline_system) {
    cfg.system.validate();
    if (cfg.x0.size() != cfg.system.n) {
      throw std::invalid_argument("config: x0 has wrong dimension for the inline system");
    }
    if (!(cfg.system.r1 > 0.0) && cfg.system.p() > 0) {
      throw std::invalid_argument("config: r1 must be positive");
    }
  } else {
    if (cfg.preset != "paper-s4") {
      throw std::invalid_argument("config: unknown preset '" + cfg.preset + "'");
    }
    if (cfg.x0.size() != 2) throw std::invalid_argument("config: preset x0 must have 2 entries");
    cfg.params.validate();
  }
}

}  // namespace

void ExperimentConfig::validate() const { check_config(*this, false); }

namespace {

double parse_double_value(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (trim(value.substr(used)) != "") throw std::invalid_argument("");
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value '" + value + "' for key '" + key +
                                "'");
  }
}

std::int64_t parse_int_value(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (trim(value.substr(used)) != "") throw std::invalid_argument("");
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value '" + value + "' for key '" + key +
                                "'");
  }
}

Eigen::VectorXd parse_vector_value(const std::string& key, const std::string& value) {
  std::vector<double> entries;
  std::stringstream stream(value);
  std::string token;
  while (std::getline(stream, token, ',')) {
    entries.push_back(parse_double_value(key, trim(token)));
  }
  if (entries.empty()) {
    throw std::invalid_argument("config: empty vector for key '" + key + "'");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) out(i) = entries[i];
  return out;
}

struct ConfigEntry {
  int line = 0;
  std::string key;
  std::string value;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::vector<ConfigEntry> entries;
  {
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const std::string stripped = trim(line);
      if (stripped.empty()) continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("config: malformed line " + std::to_string(line_no) +
                                    " (expected key = value): '" + stripped + "'");
      }
      ConfigEntry entry;
      entry.line = line_no;
      entry.key = trim(stripped.substr(0, eq));
      entry.value = trim(stripped.substr(eq + 1));
      if (entry.key.empty()) {
        throw std::invalid_argument("config: empty key on line " + std::to_string(line_no));
      }
      entries.push_back(std::move(entry));
    }
  }

  ExperimentConfig cfg;
  int state_dim = 0;
  int noise_dim = 0;
  std::vector<std::string> unknown;

  // Scalar keys first; polynomial keys need the dimensions.
  for (const ConfigEntry& entry : entries) {
    const std::string& key = entry.key;
    const std::string& value = entry.value;
    if (key == "preset") {
      cfg.preset = value;
    } else if (key == "system") {
      if (value == "inline") {
        cfg.inline_system = true;
      } else if (value == "preset") {
        cfg.inline_system = false;
      } else {
        throw std::invalid_argument("config: system must be 'preset' or 'inline'");
      }
    } else if (key == "state_dim") {
      state_dim = static_cast<int>(parse_int_value(key, value));
    } else if (key == "noise_dim") {
      noise_dim = static_cast<int>(parse_int_value(key, value));
    } else if (key == "x0") {
      cfg.x0 = parse_vector_value(key, value);
    } else if (key == "a") {
      cfg.params.a = parse_double_value(key, value);
    } else if (key == "b") {
      cfg.params.b = parse_double_value(key, value);
    } else if (key == "r1") {
      cfg.params.r1 = parse_double_value(key, value);
    } else if (key == "x01") {
      cfg.params.x01 = parse_double_value(key, value);
    } else if (key == "x02") {
      cfg.params.x02 = parse_double_value(key, value);
    } else if (key == "lifting") {
      cfg.lifting = parse_lifting(value);
    } else if (key == "filter") {
      if (value == "koopman") cfg.filter = FilterChoice::kKoopman;
      else if (value == "carleman") cfg.filter = FilterChoice::kCarleman;
      else if (value == "both") cfg.filter = FilterChoice::kBoth;
      else throw std::invalid_argument("config: filter must be koopman, carleman or both");
    } else if (key == "mode") {
      if (value == "verbatim") cfg.mode = DriftConvention::kVerbatim;
      else if (value == "ito") cfg.mode = DriftConvention::kItoCorrected;
      else throw std::invalid_argument("config: mode must be verbatim or ito");
    } else if (key == "noise_coupling") {
      if (value == "shared") cfg.coupling = NoiseCoupling::kShared;
      else if (value == "independent") cfg.coupling = NoiseCoupling::kIndependent;
      else throw std::invalid_argument("config: noise_coupling must be shared or independent");
    } else if (key == "dt") {
      cfg.dt = parse_double_value(key, value);
    } else if (key == "horizon") {
      cfg.horizon = parse_double_value(key, value);
    } else if (key == "num_runs") {
      cfg.num_runs = static_cast<int>(parse_int_value(key, value));
    } else if (key == "base_seed") {
      cfg.base_seed = static_cast<std::uint64_t>(parse_int_value(key, value));
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "cov_stride") {
      cfg.cov_stride = static_cast<int>(parse_int_value(key, value));
    } else if (key.rfind("drift.", 0) == 0 || key.rfind("diffusion.", 0) == 0 ||
               key.rfind("measurement.", 0) == 0) {
      // handled below once dimensions are known
    } else {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string joined;
    for (const std::string& key : unknown) {
      if (!joined.empty()) joined += ", ";
      joined += key;
    }
    throw std::invalid_argument("config: unknown keys: " + joined);
  }

  if (cfg.inline_system) {
    if (state_dim < 1) {
      throw std::invalid_argument("config: inline system needs state_dim >= 1");
    }
    if (noise_dim < 0) throw std::invalid_argument("config: noise_dim must be >= 0");
    cfg.system.n = state_dim;
    cfg.system.r = noise_dim;
    cfg.system.drift.assign(state_dim, Polynomial(state_dim));
    cfg.system.diffusion.assign(noise_dim,
                                std::vector<Polynomial>(state_dim, Polynomial(state_dim)));
    cfg.system.r1 = cfg.params.r1;
    int measurement_count = 0;
    for (const ConfigEntry& entry : entries) {
      if (entry.key.rfind("measurement.", 0) != 0) continue;
      measurement_count =
          std::max(measurement_count,
                   static_cast<int>(parse_int_value(entry.key, entry.key.substr(12))));
    }
    cfg.system.measurement.assign(measurement_count, Polynomial(state_dim));
    for (const ConfigEntry& entry : entries) {
      const std::string& key = entry.key;
      try {
        if (key.rfind("drift.", 0) == 0) {
          const int i = static_cast<int>(parse_int_value(key, key.substr(6)));
          if (i < 1 || i > state_dim) throw std::invalid_argument("component out of range");
          cfg.system.drift[i - 1] = Polynomial::parse(state_dim, entry.value);
        } else if (key.rfind("diffusion.", 0) == 0) {
          const std::string rest = key.substr(10);
          const auto dot = rest.find('.');
          if (dot == std::string::npos) throw std::invalid_argument("expected diffusion.<g>.<i>");
          const int g = static_cast<int>(parse_int_value(key, rest.substr(0, dot)));
          const int i = static_cast<int>(parse_int_value(key, rest.substr(dot + 1)));
          if (g < 1 || g > noise_dim || i < 1 || i > state_dim) {
            throw std::invalid_argument("channel/component out of range");
          }
          cfg.system.diffusion[g - 1][i - 1] = Polynomial::parse(state_dim, entry.value);
        } else if (key.rfind("measurement.", 0) == 0) {
          const int c = static_cast<int>(parse_int_value(key, key.substr(12)));
          cfg.system.measurement[c - 1] = Polynomial::parse(state_dim, entry.value);
        }
      } catch (const std::invalid_argument& err) {
        throw std::invalid_argument("config: line " + std::to_string(entry.line) + ", key '" +
                                    key + "': " + err.what());
      }
    }
  } else {
    for (const ConfigEntry& entry : entries) {
      if (entry.key.rfind("drift.", 0) == 0 || entry.key.rfind("diffusion.", 0) == 0 ||
          entry.key.rfind("measurement.", 0) == 0) {
        throw std::invalid_argument("config: line " + std::to_string(entry.line) +
                                    ": system polynomials require 'system = inline'");
      }
    }
  }

  if (!cfg.inline_system && cfg.x0.size() == 2) {
    cfg.params.x0 = Eigen::Vector2d(cfg.x0(0), cfg.x0(1));
  }
  cfg.validate();
  return cfg;
}

std::vector<double> compute_rmse(const Trajectory& truth, const Trajectory& estimate,
                                 const std::vector<int>& truth_cols,
                                 const std::vector<int>& estimate_cols) {
  if (truth_cols.size() != estimate_cols.size()) {
    throw std::invalid_argument("compute_rmse: column lists must have equal length");
  }
  if (truth.states.rows() != estimate.states.rows() || truth.states.rows() == 0) {
    throw std::invalid_argument("compute_rmse: trajectories must share a nonempty grid");
  }
  const double count = static_cast<double>(truth.states.rows());
  std::vector<double> out;
  out.reserve(truth_cols.size());
  for (std::size_t k = 0; k < truth_cols.size(); ++k) {
    const int tc = truth_cols[k];
    const int ec = estimate_cols[k];
    if (tc < 0 || tc >= truth.states.cols() || ec < 0 || ec >= estimate.states.cols()) {
      throw std::invalid_argument("compute_rmse: column index out of range");
    }
    const double sum_sq = (truth.states.col(tc) - estimate.states.col(ec)).squaredNorm();
    out.push_back(std::sqrt(sum_sq / count));
  }
  return out;
}

namespace {

struct LiftingSetup {
  LiftedBilinearSystem system;
  ObservableDictionary dictionary;
  std::vector<int> tracked;  // lifted coordinates that equal x_1..x_n
  std::vector<std::string> state_names;
  TruncationReport truncation;
  std::string label;
  bool carleman = false;
};

PolynomialSystem truth_polynomial(const ExperimentConfig& cfg) {
  return cfg.inline_system ? cfg.system : benchmark_polynomial(cfg.params, cfg.coupling);
}

LiftingSetup make_setup(const ExperimentConfig& cfg, LiftingKind kind, int order) {
  if (kind == LiftingKind::kKoopmanBenchmark && !cfg.inline_system) {
    ObservableDictionary dict = benchmark_dictionary();
    std::vector<std::string> names;
    for (const Observable& obs : dict.observables()) names.push_back(obs.name);
    return LiftingSetup{benchmark_lifted_system(cfg.params, cfg.mode, cfg.coupling),
                        std::move(dict),
                        {1, 2},
                        std::move(names),
                        TruncationReport{},
                        "koopman",
                        false};
  }

  const PolynomialSystem poly = truth_polynomial(cfg);
  std::vector<int> tracked(poly.n);
  for (int i = 0; i < poly.n; ++i) tracked[i] = i;
  std::vector<std::string> names;
  for (const Monomial& m : monomial_basis(poly.n, order)) names.push_back(monomial_name(m));

  LiftedBilinearSystem system;
  TruncationReport truncation;
  std::string label;
  if (kind == LiftingKind::kCarleman) {
    CarlemanResult result = carleman_embed(poly, order);
    system = std::move(result.system);
    truncation = std::move(result.truncation);
    label = "carleman" + std::to_string(order);
  } else {
    KoopmanBuildResult result = build_koopman_generators(monomial_dictionary(poly.n, order), poly);
    system = std::move(result.system);
    truncation = std::move(result.truncation);
    label = "koopman-generic" + std::to_string(order);
  }
  if (cfg.mode == DriftConvention::kVerbatim) system.drift_offset.setZero();
  return LiftingSetup{std::move(system),      monomial_dictionary(poly.n, order),
                      std::move(tracked),     std::move(names),
                      std::move(truncation),  std::move(label),
                      kind == LiftingKind::kCarleman};
}

std::int64_t grid_steps(const ExperimentConfig& cfg) {
  return cfg.horizon <= 0.0 ? 0 : std::llround(cfg.horizon / cfg.dt);
}

struct RunInputs {
  Trajectory truth;
  Eigen::MatrixXd dy;  // steps x p
};

// Truth path and synthesized observation increments
// dy_k = h(x_k) dt + r1 * (increment of an independent Brownian stream).
RunInputs make_run_inputs(const PolynomialSystem& poly, const SdeSystem& sde,
                          const ExperimentConfig& cfg, std::uint64_t seed, std::int64_t steps) {
  RunInputs inputs;
  const NoisePath noise = generate_noise(seed, cfg.dt, steps, sde.r);
  inputs.truth = simulate_path(sde, cfg.x0, zero_control(sde.d), cfg.dt, steps, noise);

  const int p = poly.p();
  const NoisePath obs_noise =
      generate_noise(seed + kObservationSeedOffset, cfg.dt, steps, p);
  inputs.dy.resize(steps, p);
  for (std::int64_t k = 0; k < steps; ++k) {
    const Eigen::VectorXd x = inputs.truth.states.row(k).transpose();
    for (int c = 0; c < p; ++c) {
      inputs.dy(k, c) = poly.measurement[c](x) * cfg.dt + poly.r1 * obs_noise.increments(k, c);
    }
  }
  return inputs;
}

struct FilterRun {
  Eigen::VectorXd times;
  Eigen::MatrixXd means;      // (steps+1) x m
  Eigen::MatrixXd diagonals;  // (steps+1) x m
  std::vector<Eigen::MatrixXd> covariances;  // filled only when requested
  double wall_ms = 0.0;
  long projection_events = 0;
};

FilterRun run_filter_loop(const LiftingSetup& setup, const ExperimentConfig& cfg,
                          const Eigen::MatrixXd& dy, std::int64_t steps, bool keep_covariances) {
  const Eigen::Index m = setup.system.m();
  FilterRun run;
  run.times.resize(steps + 1);
  run.means.resize(steps + 1, m);
  run.diagonals.resize(steps + 1, m);

  FilterState fs;
  fs.mean = setup.dictionary.lift(cfg.x0);
  fs.cov = Eigen::MatrixXd::Identity(m, m);
  run.times(0) = 0.0;
  run.means.row(0) = fs.mean.transpose();
  run.diagonals.row(0) = fs.cov.diagonal().transpose();
  if (keep_covariances) run.covariances.push_back(fs.cov);

  FilterDiagnostics diag;
  const auto started = std::chrono::steady_clock::now();
  for (std::int64_t k = 0; k < steps; ++k) {
    const Eigen::VectorXd increment = dy.row(k).transpose();
    fs = setup.carleman ? carleman_filter_step(setup.system, fs, increment, cfg.dt, &diag)
                        : koopman_filter_step(setup.system, fs, increment, cfg.dt, &diag);
    run.times(k + 1) = static_cast<double>(k + 1) * cfg.dt;
    run.means.row(k + 1) = fs.mean.transpose();
    run.diagonals.row(k + 1) = fs.cov.diagonal().transpose();
    if (keep_covariances) run.covariances.push_back(fs.cov);
  }
  const auto finished = std::chrono::steady_clock::now();
  run.wall_ms = std::chrono::duration<double, std::milli>(finished - started).count();
  run.projection_events = diag.projection_events;
  return run;
}

std::vector<LiftingSetup> plan_methods(const ExperimentConfig& cfg) {
  const LiftingKind koopman_kind = cfg.inline_system || cfg.lifting.kind == LiftingKind::kKoopmanGeneric
                                       ? LiftingKind::kKoopmanGeneric
                                       : LiftingKind::kKoopmanBenchmark;
  const int koopman_order =
      cfg.lifting.kind == LiftingKind::kKoopmanGeneric ? cfg.lifting.order : 2;
  const int carleman_order = cfg.lifting.kind == LiftingKind::kCarleman ? cfg.lifting.order : 2;

  std::vector<LiftingSetup> methods;
  if (cfg.filter == FilterChoice::kKoopman || cfg.filter == FilterChoice::kBoth) {
    methods.push_back(make_setup(cfg, koopman_kind, koopman_order));
  }
  if (cfg.filter == FilterChoice::kCarleman || cfg.filter == FilterChoice::kBoth) {
    methods.push_back(make_setup(cfg, LiftingKind::kCarleman, carleman_order));
  }
  return methods;
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double stddev_of(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = mean_of(values);
  double sum_sq = 0.0;
  for (double v : values) sum_sq += (v - mean) * (v - mean);
  return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

// Mean over the grid of the across-run variance of a trace family.
double trace_fluctuation(const std::vector<Eigen::VectorXd>& traces) {
  if (traces.empty() || traces.front().size() == 0) return 0.0;
  const Eigen::Index grid = traces.front().size();
  const double runs = static_cast<double>(traces.size());
  double total = 0.0;
  for (Eigen::Index t = 0; t < grid; ++t) {
    double mean = 0.0;
    for (const Eigen::VectorXd& trace : traces) mean += trace(t);
    mean /= runs;
    double var = 0.0;
    for (const Eigen::VectorXd& trace : traces) {
      var += (trace(t) - mean) * (trace(t) - mean);
    }
    total += var / runs;
  }
  return total / static_cast<double>(grid);
}

void write_report_csv(const std::string& path, const ExperimentReport& report, int state_dim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "method,seed";
  for (int i = 0; i < state_dim; ++i) out << ",rmse_x" << (i + 1);
  out << ",p11_final,p22_final\n";
  for (const MethodReport& method : report.methods) {
    for (const RunRecord& run : method.runs) {
      out << method.method << ',' << run.seed;
      for (int i = 0; i < state_dim; ++i) {
        const double value =
            (run.ok && i < static_cast<int>(run.rmse.size()))
                ? run.rmse[i]
                : std::numeric_limits<double>::quiet_NaN();
        out << ',' << format_double(value);
      }
      out << ',' << format_double(run.ok ? run.p11_final : std::numeric_limits<double>::quiet_NaN());
      out << ',' << format_double(run.ok ? run.p22_final : std::numeric_limits<double>::quiet_NaN());
      out << '\n';
    }
  }
}

void write_timing_csv(const std::string& path, const ExperimentReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "method,seed,wall_ms\n";
  for (const MethodReport& method : report.methods) {
    for (const RunRecord& run : method.runs) {
      out << method.method << ',' << run.seed << ',' << format_double(run.wall_ms) << '\n';
    }
  }
}

}  // namespace

void run_simulate(const ExperimentConfig& cfg) {
  check_config(cfg, true);
  std::filesystem::create_directories(cfg.out_dir);
  const PolynomialSystem poly = truth_polynomial(cfg);
  const SdeSystem sde = make_sde(poly);
  const LiftingSetup setup = make_setup(cfg, cfg.lifting.kind, cfg.lifting.order);
  const std::int64_t steps = grid_steps(cfg);
  const NoisePath noise = generate_noise(cfg.base_seed, cfg.dt, steps, sde.r);
  const auto [truth, lifted] =
      simulate_coupled(sde, setup.system, setup.dictionary, cfg.x0, cfg.dt, steps, noise);
  write_trajectory_csv(cfg.out_dir + "/truth.csv", truth);
  write_trajectory_csv(cfg.out_dir + "/lifted.csv", lifted);
}

void run_filter(const ExperimentConfig& cfg) {
  check_config(cfg, true);
  std::filesystem::create_directories(cfg.out_dir);
  const PolynomialSystem poly = truth_polynomial(cfg);
  if (poly.p() == 0) {
    throw std::invalid_argument("run_filter: the system has no measurement components");
  }
  const SdeSystem sde = make_sde(poly);
  const LiftingSetup setup = make_setup(cfg, cfg.lifting.kind, cfg.lifting.order);
  const std::int64_t steps = grid_steps(cfg);
  const RunInputs inputs = make_run_inputs(poly, sde, cfg, cfg.base_seed, steps);
  const FilterRun run = run_filter_loop(setup, cfg, inputs.dy, steps, cfg.cov_stride > 0);
  write_filter_trace_csv(cfg.out_dir + "/filter_" + setup.label + ".csv", run.times, run.means,
                         run.diagonals);
  if (cfg.cov_stride > 0) {
    write_full_covariance_csv(cfg.out_dir + "/filter_" + setup.label + "_cov.csv", run.times,
                              run.covariances, cfg.cov_stride);
  }
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  check_config(cfg, true);
  std::filesystem::create_directories(cfg.out_dir);
  const PolynomialSystem poly = truth_polynomial(cfg);
  if (poly.p() == 0) {
    throw std::invalid_argument("run_experiment: the system has no measurement components");
  }
  const SdeSystem sde = make_sde(poly);
  const std::vector<LiftingSetup> methods = plan_methods(cfg);
  const std::int64_t steps = grid_steps(cfg);

  ExperimentReport report;
  report.methods.resize(methods.size());
  std::vector<std::vector<Eigen::VectorXd>> p11_traces(methods.size());
  std::vector<std::vector<Eigen::VectorXd>> p22_traces(methods.size());
  std::vector<int> truth_cols(poly.n);
  for (int i = 0; i < poly.n; ++i) truth_cols[i] = i;

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    report.methods[mi].method = methods[mi].label;
    report.methods[mi].states = static_cast<int>(methods[mi].system.m());
  }

  for (int run_index = 0; run_index < cfg.num_runs; ++run_index) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(run_index);
    bool inputs_ok = true;
    RunInputs inputs;
    std::string input_error;
    try {
      inputs = make_run_inputs(poly, sde, cfg, seed, steps);
    } catch (const std::exception& err) {
      inputs_ok = false;
      input_error = err.what();
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      RunRecord record;
      record.seed = seed;
      if (!inputs_ok) {
        record.ok = false;
        record.error = input_error;
        report.methods[mi].runs.push_back(std::move(record));
        continue;
      }
      try {
        const int setup_m = static_cast<int>(methods[mi].system.m());
        const FilterRun run = run_filter_loop(methods[mi], cfg, inputs.dy, steps, false);
        Trajectory estimate;
        estimate.times = run.times;
        estimate.states = run.means;
        std::vector<int> estimate_cols;
        for (int idx : methods[mi].tracked) estimate_cols.push_back(idx);
        record.rmse = compute_rmse(inputs.truth, estimate, truth_cols, estimate_cols);
        // P11/P22 are the method's own leading covariance diagonals; the two
        // liftings order their states differently, so these are the entries
        // each method would plot, not matched physical quantities.
        record.p11_final = run.diagonals(steps, 0);
        record.p11_min = run.diagonals.col(0).minCoeff();
        record.p11_max = run.diagonals.col(0).maxCoeff();
        if (setup_m > 1) {
          record.p22_final = run.diagonals(steps, 1);
          record.p22_min = run.diagonals.col(1).minCoeff();
          record.p22_max = run.diagonals.col(1).maxCoeff();
          p22_traces[mi].push_back(run.diagonals.col(1));
        }
        p11_traces[mi].push_back(run.diagonals.col(0));
        record.wall_ms = run.wall_ms;
        record.projection_events = run.projection_events;
      } catch (const std::exception& err) {
        record.ok = false;
        record.error = err.what();
      }
      report.methods[mi].runs.push_back(std::move(record));
    }
  }

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    std::vector<double> walls;
    for (const RunRecord& run : report.methods[mi].runs) {
      if (run.ok) walls.push_back(run.wall_ms);
    }
    report.methods[mi].wall_mean_ms = mean_of(walls);
    report.methods[mi].wall_std_ms = stddev_of(walls);
    report.methods[mi].p11_fluctuation = trace_fluctuation(p11_traces[mi]);
    report.methods[mi].p22_fluctuation = trace_fluctuation(p22_traces[mi]);
  }

  write_report_csv(cfg.out_dir + "/report.csv", report, poly.n);
  write_timing_csv(cfg.out_dir + "/timing.csv", report);
  return report;
}

void run_matrices(const ExperimentConfig& cfg) {
  check_config(cfg, true);
  std::filesystem::create_directories(cfg.out_dir);
  const LiftingSetup setup = make_setup(cfg, cfg.lifting.kind, cfg.lifting.order);
  write_matrices_csv(cfg.out_dir + "/matrices_" + setup.label + ".csv", setup.system,
                     setup.state_names, setup.truncation);
}

std::string ExperimentReport::summary() const {
  std::ostringstream out;
  for (const MethodReport& method : methods) {
    int ok = 0;
    std::vector<double> rmse_means;
    for (const RunRecord& run : method.runs) {
      if (!run.ok) continue;
      ++ok;
      if (rmse_means.size() < run.rmse.size()) rmse_means.resize(run.rmse.size(), 0.0);
      for (std::size_t i = 0; i < run.rmse.size(); ++i) rmse_means[i] += run.rmse[i];
    }
    out << method.method << " (" << method.states << " states): runs=" << method.runs.size()
        << " ok=" << ok;
    for (std::size_t i = 0; i < rmse_means.size(); ++i) {
      out << " rmse_x" << (i + 1) << "=" << (ok > 0 ? rmse_means[i] / ok : 0.0);
    }
    out << " wall_ms=" << method.wall_mean_ms << "+/-" << method.wall_std_ms;
    long projections = 0;
    for (const RunRecord& run : method.runs) projections += run.projection_events;
    out << " projections=" << projections;
    out << " p11_fluct=" << method.p11_fluctuation << " p22_fluct=" << method.p22_fluctuation;
    out << '\n';
  }
  if (methods.size() >= 2) {
    out << "variance-trace fluctuation (mean over time of across-run variance; smaller means "
           "steadier P trajectories):";
    for (const MethodReport& method : methods) {
      out << ' ' << method.method << " p11=" << method.p11_fluctuation
          << " p22=" << method.p22_fluctuation;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace koopfilt
