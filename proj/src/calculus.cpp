#include "dirac/calculus.hpp"

#include "dirac/error.hpp"

namespace dirac {

namespace {

template <typename T>
void require_dim(const T& a, std::size_t n, const char* what) {
  if (a.dim() != n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimension " +
                                                  std::to_string(a.dim()) + " vs " + std::to_string(n));
  }
}

std::vector<Poly> add(const std::vector<Poly>& a, const std::vector<Poly>& b, bool subtract) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "component counts " + std::to_string(a.size()) +
                                                  " and " + std::to_string(b.size()));
  }
  std::vector<Poly> out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (subtract) {
      out[i] -= b[i];
    } else {
      out[i] += b[i];
    }
  }
  return out;
}

std::vector<Poly> scale(const Rational& c, std::vector<Poly> a) {
  for (auto& p : a) p *= c;
  return a;
}

Vector evaluate_components(const std::vector<Poly>& comps, std::span<const double> point) {
  Vector v(static_cast<Index>(comps.size()));
  for (std::size_t i = 0; i < comps.size(); ++i) v(static_cast<Index>(i)) = comps[i].evaluate(point);
  return v;
}

std::string join(const std::vector<Poly>& comps) {
  std::string out = "[";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) out += ", ";
    out += comps[i].to_string();
  }
  return out + "]";
}

}  // namespace

PolyVectorField PolyVectorField::zero(std::size_t n) { return {std::vector<Poly>(n, Poly(n))}; }
Vector PolyVectorField::evaluate(std::span<const double> point) const {
  return evaluate_components(components, point);
}

PolyOneForm PolyOneForm::zero(std::size_t n) { return {std::vector<Poly>(n, Poly(n))}; }
Vector PolyOneForm::evaluate(std::span<const double> point) const {
  return evaluate_components(components, point);
}

PolyTwoForm PolyTwoForm::zero(std::size_t n) {
  return {std::vector<std::vector<Poly>>(n, std::vector<Poly>(n, Poly(n)))};
}

bool PolyTwoForm::is_zero() const {
  for (const auto& row : entries) {
    for (const auto& p : row) {
      if (!p.is_zero()) return false;
    }
  }
  return true;
}

Matrix PolyTwoForm::evaluate(std::span<const double> point) const {
  const auto n = static_cast<Index>(entries.size());
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = entries[i][j].evaluate(point);
  }
  return m;
}

PolySection PolySection::zero(std::size_t n) { return {PolyVectorField::zero(n), PolyOneForm::zero(n)}; }

Vector PolySection::evaluate(std::span<const double> point) const {
  Vector v(static_cast<Index>(2 * dim()));
  v << field.evaluate(point), form.evaluate(point);
  return v;
}

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b) {
  return {add(a.components, b.components, false)};
}
PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b) {
  return {add(a.components, b.components, true)};
}
PolyVectorField operator*(const Rational& c, const PolyVectorField& a) { return {scale(c, a.components)}; }
PolyOneForm operator+(const PolyOneForm& a, const PolyOneForm& b) {
  return {add(a.components, b.components, false)};
}
PolyOneForm operator-(const PolyOneForm& a, const PolyOneForm& b) {
  return {add(a.components, b.components, true)};
}
PolyOneForm operator*(const Rational& c, const PolyOneForm& a) { return {scale(c, a.components)}; }
PolyOneForm operator*(const Poly& f, const PolyOneForm& a) {
  PolyOneForm out = a;
  for (auto& p : out.components) p = f * p;
  return out;
}
PolySection operator+(const PolySection& a, const PolySection& b) {
  return {a.field + b.field, a.form + b.form};
}
PolySection operator-(const PolySection& a, const PolySection& b) {
  return {a.field - b.field, a.form - b.form};
}
PolySection operator*(const Rational& c, const PolySection& a) { return {c * a.field, c * a.form}; }

PolyOneForm d_function(const Poly& f) {
  PolyOneForm out;
  for (std::size_t i = 0; i < f.n_vars(); ++i) out.components.push_back(f.derivative(i));
  return out;
}

PolyTwoForm d_oneform(const PolyOneForm& alpha) {
  const std::size_t n = alpha.dim();
  PolyTwoForm out = PolyTwoForm::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Poly c = alpha.components[j].derivative(i) - alpha.components[i].derivative(j);
      out.entries[j][i] = -c;
      out.entries[i][j] = std::move(c);
    }
  }
  return out;
}

std::vector<Poly> d_twoform(const PolyTwoForm& omega) {
  const std::size_t n = omega.dim();
  const auto& w = omega.entries;
  std::vector<Poly> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        out.push_back(w[j][k].derivative(i) + w[k][i].derivative(j) + w[i][j].derivative(k));
      }
    }
  }
  return out;
}

Poly apply(const PolyVectorField& x, const Poly& f) {
  require_dim(x, f.n_vars(), "apply");
  Poly out(f.n_vars());
  for (std::size_t i = 0; i < x.dim(); ++i) out += x.components[i] * f.derivative(i);
  return out;
}

Poly contract(const PolyOneForm& alpha, const PolyVectorField& x) {
  require_dim(alpha, x.dim(), "contract");
  Poly out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) out += alpha.components[i] * x.components[i];
  return out;
}

PolyOneForm interior(const PolyVectorField& x, const PolyTwoForm& omega) {
  require_dim(omega, x.dim(), "interior");
  const std::size_t n = x.dim();
  PolyOneForm out = PolyOneForm::zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!omega.entries[i][j].is_zero()) out.components[j] += x.components[i] * omega.entries[i][j];
    }
  }
  return out;
}

PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y) {
  require_dim(y, x.dim(), "lie_bracket");
  PolyVectorField out;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    out.components.push_back(apply(x, y.components[i]) - apply(y, x.components[i]));
  }
  return out;
}

PolyOneForm lie_derivative_oneform(const PolyVectorField& x, const PolyOneForm& alpha) {
  require_dim(alpha, x.dim(), "lie_derivative_oneform");
  return interior(x, d_oneform(alpha)) + d_function(contract(alpha, x));
}

Poly pairing(const PolySection& s1, const PolySection& s2) {
  return contract(s1.form, s2.field) + contract(s2.form, s1.field);
}

PolySection courant_bracket(const PolySection& s1, const PolySection& s2) {
  require_dim(s2, s1.dim(), "courant_bracket");
  const auto& [x, alpha] = s1;
  const auto& [y, beta] = s2;
  Poly correction = contract(alpha, y) - contract(beta, x);
  correction *= Rational(1, 2);
  return {lie_bracket(x, y),
          lie_derivative_oneform(x, beta) - lie_derivative_oneform(y, alpha) + d_function(correction)};
}

PolySection dorfman_bracket(const PolySection& s1, const PolySection& s2) {
  require_dim(s2, s1.dim(), "dorfman_bracket");
  const auto& [x, alpha] = s1;
  const auto& [y, beta] = s2;
  return {lie_bracket(x, y), lie_derivative_oneform(x, beta) - interior(y, d_oneform(alpha))};
}

std::string to_string(const PolyVectorField& x) { return join(x.components); }
std::string to_string(const PolyOneForm& alpha) { return join(alpha.components); }

}  // namespace dirac
