#include <doctest.h>

#include <stdexcept>

#include "koopfilt/polynomial.hpp"

using namespace koopfilt;

TEST_SUITE("polynomial") {

TEST_CASE("arithmetic and evaluation") {
  const Polynomial x1 = Polynomial::variable(2, 0);
  const Polynomial x2 = Polynomial::variable(2, 1);
  const Polynomial p = (x1 + Polynomial::constant(2, 1.0)) * (x1 - Polynomial::constant(2, 1.0));
  CHECK(p.coeff({2, 0}) == 1.0);
  CHECK(p.coeff({0, 0}) == -1.0);
  CHECK(p.coeff({1, 0}) == 0.0);

  const Polynomial q = 2.0 * x1 * x2 - x2;
  Eigen::VectorXd point(2);
  point << 3.0, -2.0;
  CHECK(q(point) == doctest::Approx(2.0 * 3.0 * -2.0 + 2.0));
  CHECK(q.degree() == 2);
}

TEST_CASE("cancellation prunes terms") {
  const Polynomial x1 = Polynomial::variable(1, 0);
  const Polynomial zero = x1 - x1;
  CHECK(zero.is_zero());
  CHECK(zero.degree() == 0);
}

TEST_CASE("derivative") {
  // d/dx1 (x1^2 x2 + 3 x1) = 2 x1 x2 + 3
  const Polynomial p = Polynomial::parse(2, "x1^2*x2 + 3*x1");
  const Polynomial d = p.derivative(0);
  CHECK(d.coeff({1, 1}) == 2.0);
  CHECK(d.coeff({0, 0}) == 3.0);
  CHECK(d.derivative(1).coeff({1, 0}) == 2.0);
}

TEST_CASE("parse handles signs, coefficients and powers") {
  const Polynomial p = Polynomial::parse(2, "-x1 + 0.5*x1*x2^2 - 2");
  CHECK(p.coeff({1, 0}) == -1.0);
  CHECK(p.coeff({1, 2}) == 0.5);
  CHECK(p.coeff({0, 0}) == -2.0);

  const Polynomial q = Polynomial::parse(2, " 2 * x2 ");
  CHECK(q.coeff({0, 1}) == 2.0);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(Polynomial::parse(2, "x0"), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse(2, "x3"), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse(2, "x1 +"), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse(2, "x1 x2"), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse(2, ""), std::invalid_argument);
  CHECK_THROWS_AS(Polynomial::parse(2, "1..5"), std::invalid_argument);
}

TEST_CASE("monomial basis ordering for two variables") {
  const std::vector<Monomial> basis = monomial_basis(2, 2);
  REQUIRE(basis.size() == 5);
  CHECK(basis[0] == Monomial{1, 0});  // x1
  CHECK(basis[1] == Monomial{0, 1});  // x2
  CHECK(basis[2] == Monomial{2, 0});  // x1^2
  CHECK(basis[3] == Monomial{0, 2});  // x2^2
  CHECK(basis[4] == Monomial{1, 1});  // x1*x2
}

TEST_CASE("monomial basis counts satisfy C(n+N,N) - 1") {
  for (int n = 1; n <= 3; ++n) {
    for (int N = 1; N <= 4; ++N) {
      CHECK(static_cast<std::int64_t>(monomial_basis(n, N).size()) == monomial_basis_size(n, N));
    }
  }
  CHECK(monomial_basis_size(2, 1) == 2);
  CHECK(monomial_basis_size(2, 2) == 5);
  CHECK(monomial_basis_size(2, 3) == 9);
  CHECK(monomial_basis_size(2, 4) == 14);
  CHECK(monomial_basis_size(3, 2) == 9);
}

TEST_CASE("monomial names") {
  CHECK(monomial_name({2, 1}) == "x1^2*x2");
  CHECK(monomial_name({0, 1}) == "x2");
  CHECK(monomial_name({0, 0}) == "1");
}

TEST_CASE("polynomial system validation") {
  PolynomialSystem sys;
  sys.n = 2;
  sys.r = 1;
  sys.drift = {Polynomial::parse(2, "x1"), Polynomial::parse(2, "x2")};
  sys.diffusion = {{Polynomial::constant(2, 1.0), Polynomial::constant(2, 1.0)}};
  CHECK_NOTHROW(sys.validate());

  sys.drift.pop_back();
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}

}  // TEST_SUITE
