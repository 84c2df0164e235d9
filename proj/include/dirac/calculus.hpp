#pragma once

#include "dirac/poly.hpp"
#include "dirac/subspace.hpp"

#include <string>
#include <vector>

namespace dirac {

struct PolyVectorField {
  std::vector<Poly> components;

  std::size_t dim() const { return components.size(); }
  static PolyVectorField zero(std::size_t n);
  Vector evaluate(std::span<const double> point) const;
  friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;
};

struct PolyOneForm {
  std::vector<Poly> components;

  std::size_t dim() const { return components.size(); }
  static PolyOneForm zero(std::size_t n);
  Vector evaluate(std::span<const double> point) const;
  friend bool operator==(const PolyOneForm&, const PolyOneForm&) = default;
};

/// Antisymmetric matrix of polynomials; entry (i, j) is the coefficient of dx_i ^ dx_j.
struct PolyTwoForm {
  std::vector<std::vector<Poly>> entries;

  std::size_t dim() const { return entries.size(); }
  static PolyTwoForm zero(std::size_t n);
  bool is_zero() const;
  Matrix evaluate(std::span<const double> point) const;
  friend bool operator==(const PolyTwoForm&, const PolyTwoForm&) = default;
};

/// A section (X, alpha) of the Pontryagin bundle.
struct PolySection {
  PolyVectorField field;
  PolyOneForm form;

  std::size_t dim() const { return field.dim(); }
  static PolySection zero(std::size_t n);
  /// Stacked (X(m), alpha(m)) in R^2n.
  Vector evaluate(std::span<const double> point) const;
  friend bool operator==(const PolySection&, const PolySection&) = default;
};

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b);
PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b);
PolyVectorField operator*(const Rational& c, const PolyVectorField& a);
PolyOneForm operator+(const PolyOneForm& a, const PolyOneForm& b);
PolyOneForm operator-(const PolyOneForm& a, const PolyOneForm& b);
PolyOneForm operator*(const Rational& c, const PolyOneForm& a);
PolyOneForm operator*(const Poly& f, const PolyOneForm& a);
PolySection operator+(const PolySection& a, const PolySection& b);
PolySection operator-(const PolySection& a, const PolySection& b);
PolySection operator*(const Rational& c, const PolySection& a);

PolyOneForm d_function(const Poly& f);
/// (d alpha)_ij = d_i alpha_j - d_j alpha_i.
PolyTwoForm d_oneform(const PolyOneForm& alpha);
/// Coefficients of the 3-form d Omega on dx_i ^ dx_j ^ dx_k, i < j < k, in
/// lexicographic order of (i, j, k).
std::vector<Poly> d_twoform(const PolyTwoForm& omega);

/// X(f) = sum_i X^i d_i f.
Poly apply(const PolyVectorField& x, const Poly& f);
/// alpha(X).
Poly contract(const PolyOneForm& alpha, const PolyVectorField& x);
/// (i_X Omega)_j = sum_i X^i Omega_ij.
PolyOneForm interior(const PolyVectorField& x, const PolyTwoForm& omega);

/// [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i.
PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y);
/// Cartan formula i_X d alpha + d(alpha(X)).
PolyOneForm lie_derivative_oneform(const PolyVectorField& x, const PolyOneForm& alpha);

/// <(X, a), (Y, b)> = a(Y) + b(X).
Poly pairing(const PolySection& s1, const PolySection& s2);

/// ([X, Y], L_X b - L_Y a + 1/2 d(a(Y) - b(X))).
PolySection courant_bracket(const PolySection& s1, const PolySection& s2);
/// ([X, Y], L_X b - i_Y d a).
PolySection dorfman_bracket(const PolySection& s1, const PolySection& s2);

std::string to_string(const PolyVectorField& x);
std::string to_string(const PolyOneForm& alpha);

}  // namespace dirac
