#include "koopfilt/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace koopfilt {

std::string monomial_name(const Monomial& exponents) {
  std::string out;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += "x" + std::to_string(i + 1);
    if (exponents[i] > 1) out += "^" + std::to_string(exponents[i]);
  }
  return out.empty() ? "1" : out;
}

int monomial_degree(const Monomial& exponents) {
  int deg = 0;
  for (int e : exponents) deg += e;
  return deg;
}

namespace {

void enumerate_degree(int vars, int degree, int var, Monomial* current,
                      std::vector<Monomial>* out) {
  if (var == vars - 1) {
    (*current)[var] = degree;
    out->push_back(*current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    (*current)[var] = e;
    enumerate_degree(vars, degree - e, var + 1, current, out);
  }
  (*current)[var] = 0;
}

int distinct_vars(const Monomial& m) {
  int count = 0;
  for (int e : m) count += (e > 0) ? 1 : 0;
  return count;
}

}  // namespace

std::vector<Monomial> monomial_basis(int vars, int max_degree) {
  if (vars < 1 || max_degree < 1) {
    throw std::invalid_argument("monomial_basis: vars and max_degree must be >= 1");
  }
  std::vector<Monomial> out;
  for (int deg = 1; deg <= max_degree; ++deg) {
    std::vector<Monomial> level;
    Monomial current(vars, 0);
    enumerate_degree(vars, deg, 0, &current, &level);
    // Pure powers first (ascending variable), then mixed monomials in
    // descending lexicographic exponent order.
    std::vector<Monomial> pure, mixed;
    for (const Monomial& m : level) {
      (distinct_vars(m) <= 1 ? pure : mixed).push_back(m);
    }
    std::sort(pure.begin(), pure.end(), std::greater<Monomial>());
    std::sort(mixed.begin(), mixed.end(), std::greater<Monomial>());
    out.insert(out.end(), pure.begin(), pure.end());
    out.insert(out.end(), mixed.begin(), mixed.end());
  }
  return out;
}

std::int64_t monomial_basis_size(int vars, int max_degree) {
  std::int64_t binom = 1;
  for (int i = 1; i <= max_degree; ++i) {
    binom = binom * (vars + i) / i;
  }
  return binom - 1;
}

Polynomial Polynomial::constant(int vars, double value) {
  Polynomial p(vars);
  p.add_term(Monomial(vars, 0), value);
  return p;
}

Polynomial Polynomial::monomial(int vars, const Monomial& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != vars) {
    throw std::invalid_argument("Polynomial::monomial: exponent size mismatch");
  }
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("Polynomial::monomial: negative exponent");
  }
  Polynomial p(vars);
  p.add_term(exponents, coeff);
  return p;
}

Polynomial Polynomial::variable(int vars, int index) {
  if (index < 0 || index >= vars) {
    throw std::invalid_argument("Polynomial::variable: index out of range");
  }
  Monomial m(vars, 0);
  m[index] = 1;
  return monomial(vars, m, 1.0);
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_) deg = std::max(deg, monomial_degree(m));
  return deg;
}

double Polynomial::coeff(const Monomial& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != vars_) {
    throw std::invalid_argument("Polynomial: evaluation point has wrong dimension");
  }
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c;
    for (int i = 0; i < vars_; ++i) {
      for (int e = 0; e < m[i]; ++e) term *= x(i);
    }
    total += term;
  }
  return total;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= vars_) {
    throw std::invalid_argument("Polynomial::derivative: variable out of range");
  }
  Polynomial out(vars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    out.add_term(d, c * m[var]);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  Polynomial out(vars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m(vars_);
      for (int i = 0; i < vars_; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

Polynomial& Polynomial::operator*=(double scalar) {
  if (scalar == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

void Polynomial::add_term(const Monomial& exponents, double coeff) {
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(exponents, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    const double mag = std::abs(c);
    const std::string name = monomial_name(m);
    if (name == "1") {
      out += std::to_string(mag);
    } else if (mag == 1.0) {
      out += name;
    } else {
      out += std::to_string(mag) + "*" + name;
    }
  }
  return out;
}

namespace {

struct Parser {
  int vars;
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument("polynomial parse error at position " +
                                std::to_string(pos) + ": " + message);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  double parse_number() {
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == 'e' || text[pos] == 'E' ||
            ((text[pos] == '+' || text[pos] == '-') && pos > start &&
             (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
      ++pos;
    }
    try {
      std::size_t used = 0;
      const std::string token(text.substr(start, pos - start));
      const double value = std::stod(token, &used);
      if (used != token.size()) fail("bad number '" + token + "'");
      return value;
    } catch (const std::invalid_argument&) {
      fail("expected a number");
    } catch (const std::out_of_range&) {
      fail("number out of range");
    }
  }

  int parse_int() {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail("expected an integer");
    return std::stoi(std::string(text.substr(start, pos - start)));
  }

  // factor := number | 'x' index ['^' exponent]
  void parse_factor(double* coeff, Monomial* exponents) {
    skip_ws();
    if (peek() == 'x') {
      ++pos;
      const int index = parse_int();
      if (index < 1 || index > vars) {
        fail("variable x" + std::to_string(index) + " out of range (have " +
             std::to_string(vars) + " variables)");
      }
      int power = 1;
      if (peek() == '^') {
        ++pos;
        power = parse_int();
        if (power < 0) fail("negative exponent");
      }
      (*exponents)[index - 1] += power;
    } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      *coeff *= parse_number();
    } else {
      fail(std::string("unexpected character '") + peek() + "'");
    }
  }

  Polynomial run() {
    Polynomial out(vars);
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      skip_ws();
      if (peek() == '+' || peek() == '-') {
        sign = (text[pos] == '-') ? -1.0 : 1.0;
        ++pos;
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      double coeff = sign;
      Monomial exponents(vars, 0);
      parse_factor(&coeff, &exponents);
      skip_ws();
      while (peek() == '*') {
        ++pos;
        parse_factor(&coeff, &exponents);
        skip_ws();
      }
      out += Polynomial::monomial(vars, exponents, coeff);
      first = false;
    }
    if (first) fail("empty polynomial");
    return out;
  }
};

}  // namespace

Polynomial Polynomial::parse(int vars, std::string_view text) {
  if (vars < 1) throw std::invalid_argument("Polynomial::parse: vars must be >= 1");
  Parser parser{vars, text};
  return parser.run();
}

void PolynomialSystem::validate() const {
  if (n < 1) throw std::invalid_argument("PolynomialSystem: n must be >= 1");
  if (r < 0) throw std::invalid_argument("PolynomialSystem: r must be >= 0");
  if (static_cast<int>(drift.size()) != n) {
    throw std::invalid_argument("PolynomialSystem: drift must have n components");
  }
  if (static_cast<int>(diffusion.size()) != r) {
    throw std::invalid_argument("PolynomialSystem: diffusion must have r columns");
  }
  auto check_vars = [this](const Polynomial& poly, const char* what) {
    if (poly.vars() != n) {
      throw std::invalid_argument(std::string("PolynomialSystem: ") + what +
                                  " has wrong variable count");
    }
  };
  for (const Polynomial& poly : drift) check_vars(poly, "drift component");
  for (const auto& column : diffusion) {
    if (static_cast<int>(column.size()) != n) {
      throw std::invalid_argument("PolynomialSystem: diffusion column must have n components");
    }
    for (const Polynomial& poly : column) check_vars(poly, "diffusion component");
  }
  for (const Polynomial& poly : measurement) check_vars(poly, "measurement component");
}

}  // namespace koopfilt
