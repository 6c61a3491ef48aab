#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "koopfilt/lifted_system.hpp"
#include "koopfilt/observables.hpp"
#include "koopfilt/polynomial.hpp"
#include "koopfilt/sde.hpp"

namespace koopfilt {

// Lie derivative of an observable along the drift, <grad phi, f(x, u)>.
double lie_drift(const Observable& obs, const SdeSystem& system, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u);

// Second-order Ito correction, (1/2) tr(Hess phi * sum_g g_gamma g_gamma^T).
double lie_diffusion_correction(const Observable& obs, const SdeSystem& system,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& u);

// Lie derivative along one noise column, <grad phi, g_gamma(x, u)>.
double lie_noise(const Observable& obs, const SdeSystem& system, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& u, int channel);

// One monomial that fell outside the dictionary span and was dropped, with
// the generator row it came from and the coefficient it carried.
struct TruncationRecord {
  int source_row = 0;
  Monomial dropped;
  double coefficient = 0.0;
  std::string target;  // "Lambda_f", "Lambda_b", "D1", ...
};

struct TruncationReport {
  std::vector<TruncationRecord> dropped;
  bool empty() const { return dropped.empty(); }
};

struct KoopmanBuildResult {
  LiftedBilinearSystem system;
  TruncationReport truncation;
};

// Expands the Ito evolution of every dictionary observable in the dictionary
// span. Every observable must be a pure monomial (Observable::monomial set);
// anything else throws UnsupportedObservable. Constant terms go to
// drift_offset / noise_offset, in-span monomials become matrix entries, and
// out-of-span monomials are dropped and recorded. Measurement components
// must expand exactly (no constant term, no out-of-span monomial) or
// std::invalid_argument is thrown.
KoopmanBuildResult build_koopman_generators(const ObservableDictionary& dictionary,
                                            const PolynomialSystem& poly);

// Residual channel selector for truncation_residual: the combined
// drift-plus-Ito term rather than a noise column.
inline constexpr int kDriftTerm = -1;

// Mean over `samples` of || exact Lie derivative - reconstruction ||, where
// the reconstruction is D_g lift(x) + F_g for a noise channel and
// (Lambda_f + Lambda_b) lift(x) + G for kDriftTerm. Zero when the dictionary
// span is invariant. Throws std::invalid_argument on an empty sample list.
double truncation_residual(const ObservableDictionary& dictionary,
                           const PolynomialSystem& poly,
                           const std::vector<Eigen::VectorXd>& samples, int channel);

struct CarlemanResult {
  LiftedBilinearSystem system;
  std::vector<Monomial> ordering;
  TruncationReport truncation;
};

// Carleman embedding of order N: the lifted state is every monomial of total
// degree 1..N in monomial_basis() order, each generator row is the exact Ito
// rule on that monomial, and resulting monomials of degree > N are dropped
// and recorded. Throws std::length_error when the state count would exceed
// max_states.
CarlemanResult carleman_embed(const PolynomialSystem& poly, int order,
                              int max_states = 4096);

}  // namespace koopfilt
