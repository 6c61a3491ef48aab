#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace koopfilt {

// Exponent multi-index, one entry per state variable.
using Monomial = std::vector<int>;

// Human-readable form, e.g. "x1^2*x2"; the empty monomial prints as "1".
std::string monomial_name(const Monomial& exponents);

int monomial_degree(const Monomial& exponents);

// All monomials of total degree 1..max_degree, the state ordering used by
// every generator builder and recorded in exported metadata. Degree-graded;
// within one degree the pure powers x_i^d come first (i ascending), followed
// by the mixed monomials in descending lexicographic exponent order. For two
// variables and max_degree 2 this yields x1, x2, x1^2, x2^2, x1*x2.
std::vector<Monomial> monomial_basis(int vars, int max_degree);

// Count of monomials of degree 1..max_degree in `vars` variables,
// C(vars + max_degree, max_degree) - 1.
std::int64_t monomial_basis_size(int vars, int max_degree);

// Sparse multivariate polynomial with real coefficients.
class Polynomial {
 public:
  explicit Polynomial(int vars) : vars_(vars) {}

  static Polynomial constant(int vars, double value);
  static Polynomial monomial(int vars, const Monomial& exponents, double coeff = 1.0);
  static Polynomial variable(int vars, int index);  // index is 0-based

  // Parses a monomial sum such as "-x1 + 0.5*x1*x2^2 - 2". Variables are
  // x1..x<vars>; factors within a term are separated by '*'. Throws
  // std::invalid_argument with a character position on malformed input.
  static Polynomial parse(int vars, std::string_view text);

  int vars() const { return vars_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // 0 for the zero polynomial
  double coeff(const Monomial& exponents) const;
  const std::map<Monomial, double>& terms() const { return terms_; }

  double operator()(const Eigen::VectorXd& x) const;

  Polynomial derivative(int var) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(double scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }

  std::string to_string() const;

 private:
  void add_term(const Monomial& exponents, double coeff);

  int vars_;
  std::map<Monomial, double> terms_;  // exponents -> coefficient, zeros pruned
};

// A controlled Ito system whose drift, diffusion columns and measurement map
// are monomial sums, at a fixed control value.
struct PolynomialSystem {
  int n = 0;  // state dimension
  int r = 0;  // noise channels
  std::vector<Polynomial> drift;                   // n components
  std::vector<std::vector<Polynomial>> diffusion;  // r columns of n components
  std::vector<Polynomial> measurement;             // p components, may be empty
  double r1 = 0.0;                                 // measurement noise scale

  int p() const { return static_cast<int>(measurement.size()); }
  void validate() const;  // throws std::invalid_argument on shape mismatch
};

}  // namespace koopfilt
