#pragma once

#include <Eigen/Dense>
#include <functional>

#include "koopfilt/lifted_system.hpp"

namespace koopfilt {

// Conditional mean and covariance of a lifted state. The covariance is kept
// symmetric (exact resymmetrization every step) and PSD up to roundoff
// (eigenvalue clipping when the smallest eigenvalue falls below -1e-10).
struct FilterState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct FilterDiagnostics {
  long projection_events = 0;
};

// (P + P^T)/2, with negative eigenvalues clipped to zero when the smallest
// eigenvalue is below -1e-10. Increments diag->projection_events when the
// clip fires.
Eigen::MatrixXd symmetrize_and_project(const Eigen::Ref<const Eigen::MatrixXd>& P,
                                       FilterDiagnostics* diag = nullptr);

// Conditional second moment of the diffusion,
//   E[b(z) b(z)^T | Y] = sum_g [ D_g P D_g^T + D_g zh zh^T D_g^T
//                                + D_g zh F_g^T + F_g zh^T D_g^T + F_g F_g^T ]
// using E[z z^T | Y] = P + zh zh^T. Always symmetric.
Eigen::MatrixXd expected_bbT(const LiftedBilinearSystem& lifted, const FilterState& fs);

// One explicit Euler step of the bilinear filter:
//   mean:  zh += ((Lambda_f + Lambda_b) zh + G) dt + P C^T r1^-2 (dy - C zh dt)
//   cov:   P  += (Lambda P + P Lambda^T + E[b b^T|Y] - P C^T r1^-2 C P) dt
// followed by symmetrization/projection. The covariance flow is the
// generalized Riccati equation; with every D_g zero it reduces to the
// standard Riccati equation.
FilterState koopman_filter_step(const LiftedBilinearSystem& lifted, const FilterState& fs,
                                const Eigen::VectorXd& dy, double dt,
                                FilterDiagnostics* diag = nullptr);

// Same update on a Carleman-embedded system. The two liftings differ in how
// their generators are constructed, not in the filter recursion, so this is
// the same kernel.
FilterState carleman_filter_step(const LiftedBilinearSystem& lifted, const FilterState& fs,
                                 const Eigen::VectorXd& dy, double dt,
                                 FilterDiagnostics* diag = nullptr);

// Covariance half of the update above (exposed so hand-written mean updates
// can share it).
Eigen::MatrixXd generalized_riccati_step(const LiftedBilinearSystem& lifted,
                                         const FilterState& fs, double dt,
                                         FilterDiagnostics* diag = nullptr);

// A nonlinear filter model given through callbacks. Hessian callbacks may be
// null, which is treated as identically zero.
struct GenericFilterModel {
  int m = 0;  // state dimension
  int p = 0;  // measurement dimension
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;           // a(z)
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> drift_jacobian;  // m x m
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> drift_hessian;  // Hess a_j
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> bbT;             // m x m
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int, int)> bbT_hessian;  // Hess (bbT)_ij
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> measurement;           // h(z)
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> measurement_jacobian;  // p x m
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&, int)> measurement_hessian;  // Hess h_c
  double r1 = 0.0;
};

// One explicit Euler step of the second-order nonlinear filter. The expected
// measurement drift h(zh) + (1/2) sum_pq P_pq Hess(h_c) enters the
// innovation, the mean drift carries the matching (1/2) sum_pq P_pq
// Hess(a_j) correction, and the covariance flow carries (bb^T)(zh), its
// second-order correction, the gain term, and the innovation-driven
// correction sum_c P Hess(h_c) P r1^-2 (dy - E[h] dt)_c (which vanishes for
// linear h).
FilterState second_order_filter_step(const GenericFilterModel& model, const FilterState& fs,
                                     const Eigen::VectorXd& dy, double dt,
                                     FilterDiagnostics* diag = nullptr);

// Closed-form GenericFilterModel of a bilinear lifted system:
//   a(z) = (Lambda_f + Lambda_b) z + G,
//   (bb^T)(z) = sum_g (D_g z + F_g)(D_g z + F_g)^T,
//   h(z) = C z.
// Feeding the result to second_order_filter_step reproduces
// koopman_filter_step.
GenericFilterModel wrap_bilinear_as_generic(const LiftedBilinearSystem& lifted);

}  // namespace koopfilt
