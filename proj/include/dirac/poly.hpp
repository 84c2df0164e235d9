#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dirac {

using Rational = mpq_class;

/// Exact conversion of a finite double (doubles are dyadic rationals).
Rational rational_from_double(double x);
/// Parses "3", "-2/7", "0.125", "1e-3" exactly.
Rational parse_rational(std::string_view text);

/// Sparse multivariate polynomial over Q with terms kept in canonical order.
class Poly {
 public:
  using Monomial = std::vector<unsigned>;
  using Terms = std::map<Monomial, Rational>;

  explicit Poly(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  static Poly constant(std::size_t n_vars, const Rational& c);
  static Poly variable(std::size_t n_vars, std::size_t i);
  static Poly monomial(const Monomial& exponents, const Rational& c);

  std::size_t n_vars() const { return n_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned degree() const;

  Rational coefficient(const Monomial& exponents) const;
  void add_term(const Monomial& exponents, const Rational& c);

  Poly derivative(std::size_t i) const;
  /// f(images[0], ..., images[n-1]); all images share one variable count.
  Poly substitute(std::span<const Poly> images) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate(std::span<const Rational> point) const;

  /// Drops terms with |c| <= rel * max|c| and rounds the rest to doubles.
  Poly rounded(double rel) const;

  /// Canonical text, e.g. "x^2*y - 1/2*z + 3"; parse(to_string()) round-trips.
  std::string to_string() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  void require_same_vars(const Poly& o) const;

  std::size_t n_vars_;
  Terms terms_;
};

/// Variable names: x, y, z for n <= 3, otherwise x1 .. xn.
std::string variable_name(std::size_t n_vars, std::size_t i);

/// Parses +, -, *, ^ (nonnegative integer), division by constants,
/// parentheses, decimal literals and the names of `variable_name`.
Poly parse_poly(std::string_view text, std::size_t n_vars);

}  // namespace dirac
