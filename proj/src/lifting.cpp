#include "koopfilt/lifting.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "koopfilt/errors.hpp"

namespace koopfilt {

double lie_drift(const Observable& obs, const SdeSystem& system, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u) {
  if (obs.domain && !obs.domain(x)) {
    throw std::domain_error("observable '" + obs.name + "' is undefined at the requested state");
  }
  return obs.gradient(x).dot(system.drift(x, u));
}

double lie_diffusion_correction(const Observable& obs, const SdeSystem& system,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  if (obs.domain && !obs.domain(x)) {
    throw std::domain_error("observable '" + obs.name + "' is undefined at the requested state");
  }
  const Eigen::MatrixXd hess = obs.hessian(x);
  double total = 0.0;
  for (int g = 0; g < system.r; ++g) {
    const Eigen::VectorXd col = system.diffusion[g](x, u);
    total += col.dot(hess * col);
  }
  return 0.5 * total;
}

double lie_noise(const Observable& obs, const SdeSystem& system, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u, int channel) {
  if (channel < 0 || channel >= system.r) {
    throw std::invalid_argument("lie_noise: channel out of range");
  }
  if (obs.domain && !obs.domain(x)) {
    throw std::domain_error("observable '" + obs.name + "' is undefined at the requested state");
  }
  return obs.gradient(x).dot(system.diffusion[channel](x, u));
}

namespace {

// Splits a polynomial into a constant part, coefficients on dictionary
// monomials, and dropped out-of-span terms.
void expand_in_span(const Polynomial& poly, const std::map<Monomial, int>& index, int row,
                    Eigen::Ref<Eigen::MatrixXd> matrix, double* constant,
                    const std::string& target, TruncationReport* report) {
  for (const auto& [mono, coeff] : poly.terms()) {
    if (monomial_degree(mono) == 0) {
      *constant += coeff;
      continue;
    }
    auto it = index.find(mono);
    if (it != index.end()) {
      matrix(row, it->second) += coeff;
    } else {
      report->dropped.push_back({row, mono, coeff, target});
    }
  }
}

// <grad mu, f>, the part of the Ito rule that feeds Lambda_f.
Polynomial drift_polynomial(const Polynomial& mu, const PolynomialSystem& poly) {
  Polynomial out(poly.n);
  for (int l = 0; l < poly.n; ++l) {
    out += mu.derivative(l) * poly.drift[l];
  }
  return out;
}

// (1/2) sum_{l1,l2} d2 mu * sum_g g_l1 g_l2, the part that feeds Lambda_b.
Polynomial ito_correction_polynomial(const Polynomial& mu, const PolynomialSystem& poly) {
  Polynomial out(poly.n);
  for (int l1 = 0; l1 < poly.n; ++l1) {
    for (int l2 = 0; l2 < poly.n; ++l2) {
      const Polynomial second = mu.derivative(l1).derivative(l2);
      if (second.is_zero()) continue;
      Polynomial quad(poly.n);
      for (int g = 0; g < poly.r; ++g) {
        quad += poly.diffusion[g][l1] * poly.diffusion[g][l2];
      }
      out += 0.5 * (second * quad);
    }
  }
  return out;
}

Polynomial noise_polynomial(const Polynomial& mu, const PolynomialSystem& poly, int channel) {
  Polynomial out(poly.n);
  for (int l = 0; l < poly.n; ++l) {
    out += mu.derivative(l) * poly.diffusion[channel][l];
  }
  return out;
}

}  // namespace

KoopmanBuildResult build_koopman_generators(const ObservableDictionary& dictionary,
                                            const PolynomialSystem& poly) {
  poly.validate();
  if (dictionary.state_dim() != poly.n) {
    throw std::invalid_argument("build_koopman_generators: dictionary/system dimension mismatch");
  }

  const int m = dictionary.size();
  std::map<Monomial, int> index;
  for (int j = 0; j < m; ++j) {
    const Observable& obs = dictionary.at(j);
    if (!obs.monomial.has_value()) {
      throw UnsupportedObservable(obs.name);
    }
    if (!index.emplace(*obs.monomial, j).second) {
      throw std::invalid_argument("build_koopman_generators: duplicate observable " + obs.name);
    }
  }

  KoopmanBuildResult result;
  result.system = LiftedBilinearSystem::zero(m, poly.r, poly.p());
  result.system.measurement_noise = poly.r1;

  for (int j = 0; j < m; ++j) {
    const Polynomial mu = Polynomial::monomial(poly.n, *dictionary.at(j).monomial);

    double drift_constant = 0.0;
    expand_in_span(drift_polynomial(mu, poly), index, j, result.system.drift_linear,
                   &drift_constant, "Lambda_f", &result.truncation);
    expand_in_span(ito_correction_polynomial(mu, poly), index, j, result.system.drift_ito,
                   &drift_constant, "Lambda_b", &result.truncation);
    result.system.drift_offset(j) = drift_constant;

    for (int g = 0; g < poly.r; ++g) {
      double noise_constant = 0.0;
      expand_in_span(noise_polynomial(mu, poly, g), index, j, result.system.noise_linear[g],
                     &noise_constant, "D" + std::to_string(g + 1), &result.truncation);
      result.system.noise_offset[g](j) = noise_constant;
    }
  }

  for (int c = 0; c < poly.p(); ++c) {
    for (const auto& [mono, coeff] : poly.measurement[c].terms()) {
      if (monomial_degree(mono) == 0) {
        throw std::invalid_argument(
            "build_koopman_generators: measurement component " + std::to_string(c + 1) +
            " has a constant term; only linear combinations of observables are supported");
      }
      auto it = index.find(mono);
      if (it == index.end()) {
        throw std::invalid_argument("build_koopman_generators: measurement monomial " +
                                    monomial_name(mono) + " is outside the dictionary span");
      }
      result.system.measurement(c, it->second) += coeff;
    }
  }

  return result;
}

double truncation_residual(const ObservableDictionary& dictionary,
                           const PolynomialSystem& poly,
                           const std::vector<Eigen::VectorXd>& samples, int channel) {
  if (samples.empty()) {
    throw std::invalid_argument("truncation_residual: sample list is empty");
  }
  if (channel != kDriftTerm && (channel < 0 || channel >= poly.r)) {
    throw std::invalid_argument("truncation_residual: channel out of range");
  }

  const KoopmanBuildResult build = build_koopman_generators(dictionary, poly);
  const SdeSystem system = make_sde(poly);
  const Eigen::VectorXd u(0);
  const int m = dictionary.size();

  const Eigen::MatrixXd drift = build.system.drift_matrix();
  double total = 0.0;
  for (const Eigen::VectorXd& x : samples) {
    const Eigen::VectorXd z = dictionary.lift(x);
    Eigen::VectorXd exact(m);
    Eigen::VectorXd reconstructed(m);
    if (channel == kDriftTerm) {
      for (int j = 0; j < m; ++j) {
        exact(j) = lie_drift(dictionary.at(j), system, x, u) +
                   lie_diffusion_correction(dictionary.at(j), system, x, u);
      }
      reconstructed = drift * z + build.system.drift_offset;
    } else {
      for (int j = 0; j < m; ++j) {
        exact(j) = lie_noise(dictionary.at(j), system, x, u, channel);
      }
      reconstructed = build.system.noise_linear[channel] * z + build.system.noise_offset[channel];
    }
    total += (exact - reconstructed).norm();
  }
  return total / static_cast<double>(samples.size());
}

CarlemanResult carleman_embed(const PolynomialSystem& poly, int order, int max_states) {
  poly.validate();
  if (order < 1) throw std::invalid_argument("carleman_embed: order must be >= 1");
  const std::int64_t states = monomial_basis_size(poly.n, order);
  if (states > max_states) {
    throw std::length_error("carleman_embed: order " + std::to_string(order) + " needs " +
                            std::to_string(states) + " states, above the cap of " +
                            std::to_string(max_states));
  }

  CarlemanResult result;
  result.ordering = monomial_basis(poly.n, order);
  KoopmanBuildResult build = build_koopman_generators(monomial_dictionary(poly.n, order), poly);
  result.system = std::move(build.system);
  result.truncation = std::move(build.truncation);
  return result;
}

}  // namespace koopfilt
