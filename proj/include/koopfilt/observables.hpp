#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "koopfilt/polynomial.hpp"

namespace koopfilt {

// A scalar observable of the state with analytic first and second
// derivatives. `monomial` is set when the observable is exactly x^alpha,
// which is what the symbolic generator builders require. `domain` may be
// null, meaning the observable is defined everywhere.
struct Observable {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
  std::function<bool(const Eigen::VectorXd&)> domain;
  std::optional<Monomial> monomial;
};

Observable monomial_observable(int state_dim, const Monomial& exponents);

// An ordered set of observables defining the lift x -> (phi_1(x),...,phi_m(x)).
class ObservableDictionary {
 public:
  ObservableDictionary(int state_dim, std::vector<Observable> observables);

  int state_dim() const { return state_dim_; }
  int size() const { return static_cast<int>(observables_.size()); }
  const Observable& at(int j) const { return observables_.at(j); }
  const std::vector<Observable>& observables() const { return observables_; }

  // Throws std::domain_error naming the first observable whose domain
  // predicate rejects x.
  Eigen::VectorXd lift(const Eigen::VectorXd& x) const;

 private:
  int state_dim_;
  std::vector<Observable> observables_;
};

// All monomials of degree 1..max_degree in monomial_basis() order.
ObservableDictionary monomial_dictionary(int state_dim, int max_degree);

// The degree-1 monomials x_1..x_n; lift(x) == x.
ObservableDictionary identity_dictionary(int state_dim);

inline Eigen::VectorXd lift_state(const ObservableDictionary& dictionary,
                                  const Eigen::VectorXd& x) {
  return dictionary.lift(x);
}

}  // namespace koopfilt
