#include "koopfilt/observables.hpp"

#include <stdexcept>
#include <utility>

namespace koopfilt {

Observable monomial_observable(int state_dim, const Monomial& exponents) {
  const Polynomial poly = Polynomial::monomial(state_dim, exponents);
  std::vector<Polynomial> grad;
  grad.reserve(state_dim);
  std::vector<std::vector<Polynomial>> hess;
  for (int i = 0; i < state_dim; ++i) {
    grad.push_back(poly.derivative(i));
    std::vector<Polynomial> row;
    row.reserve(state_dim);
    for (int j = 0; j < state_dim; ++j) row.push_back(grad[i].derivative(j));
    hess.push_back(std::move(row));
  }

  Observable obs;
  obs.name = monomial_name(exponents);
  obs.monomial = exponents;
  obs.value = [poly](const Eigen::VectorXd& x) { return poly(x); };
  obs.gradient = [grad, state_dim](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(state_dim);
    for (int i = 0; i < state_dim; ++i) g(i) = grad[i](x);
    return g;
  };
  obs.hessian = [hess, state_dim](const Eigen::VectorXd& x) {
    Eigen::MatrixXd h(state_dim, state_dim);
    for (int i = 0; i < state_dim; ++i) {
      for (int j = 0; j < state_dim; ++j) h(i, j) = hess[i][j](x);
    }
    return h;
  };
  return obs;
}

ObservableDictionary::ObservableDictionary(int state_dim,
                                           std::vector<Observable> observables)
    : state_dim_(state_dim), observables_(std::move(observables)) {
  if (state_dim_ < 1) {
    throw std::invalid_argument("ObservableDictionary: state_dim must be >= 1");
  }
  if (observables_.empty()) {
    throw std::invalid_argument("ObservableDictionary: need at least one observable");
  }
  for (const Observable& obs : observables_) {
    if (!obs.value || !obs.gradient || !obs.hessian) {
      throw std::invalid_argument("ObservableDictionary: observable '" + obs.name +
                                  "' is missing value/gradient/hessian callbacks");
    }
  }
}

Eigen::VectorXd ObservableDictionary::lift(const Eigen::VectorXd& x) const {
  if (x.size() != state_dim_) {
    throw std::invalid_argument("ObservableDictionary::lift: state has wrong dimension");
  }
  Eigen::VectorXd z(size());
  for (int j = 0; j < size(); ++j) {
    const Observable& obs = observables_[j];
    if (obs.domain && !obs.domain(x)) {
      throw std::domain_error("observable '" + obs.name +
                              "' is undefined at the requested state");
    }
    z(j) = obs.value(x);
  }
  return z;
}

ObservableDictionary monomial_dictionary(int state_dim, int max_degree) {
  std::vector<Observable> observables;
  for (const Monomial& m : monomial_basis(state_dim, max_degree)) {
    observables.push_back(monomial_observable(state_dim, m));
  }
  return ObservableDictionary(state_dim, std::move(observables));
}

ObservableDictionary identity_dictionary(int state_dim) {
  return monomial_dictionary(state_dim, 1);
}

}  // namespace koopfilt
