#include "dirac/poly.hpp"

#include "dirac/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace dirac {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::Parse, "non-finite number cannot be made rational");
  }
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

namespace {

Rational pow10(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

// Decimal literal with optional sign, fraction and exponent.
Rational parse_decimal(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
    any = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --scale;
      any = true;
    }
  }
  if (!any) throw Error(ErrorKind::Parse, "invalid number '" + std::string(whole) + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    long e = 0;
    bool edig = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      e = e * 10 + (s[i++] - '0');
      edig = true;
      if (e > 4000) throw Error(ErrorKind::Parse, "exponent too large in '" + std::string(whole) + "'");
    }
    if (!edig) throw Error(ErrorKind::Parse, "invalid number '" + std::string(whole) + "'");
    scale += eneg ? -e : e;
  }
  if (i != s.size()) throw Error(ErrorKind::Parse, "invalid number '" + std::string(whole) + "'");
  Rational q{mpz_class(digits, 10)};
  q *= pow10(scale);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, text);
  const Rational num = parse_decimal(text.substr(0, slash), text);
  const Rational den = parse_decimal(text.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorKind::Parse, "division by zero in '" + std::string(text) + "'");
  Rational q = num / den;
  q.canonicalize();
  return q;
}

Poly Poly::constant(std::size_t n_vars, const Rational& c) {
  Poly p(n_vars);
  p.add_term(Monomial(n_vars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t n_vars, std::size_t i) {
  Monomial e(n_vars, 0);
  e.at(i) = 1;
  return monomial(e, Rational(1));
}

Poly Poly::monomial(const Monomial& exponents, const Rational& c) {
  Poly p(exponents.size());
  p.add_term(exponents, c);
  return p;
}

unsigned Poly::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned t = 0;
    for (unsigned k : e) t += k;
    d = std::max(d, t);
  }
  return d;
}

Rational Poly::coefficient(const Monomial& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& exponents, const Rational& c) {
  if (exponents.size() != n_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "monomial with " + std::to_string(exponents.size()) +
                                                  " exponents in a " + std::to_string(n_vars_) +
                                                  "-variable polynomial");
  }
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponents, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Poly::require_same_vars(const Poly& o) const {
  if (n_vars_ != o.n_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "polynomials in " + std::to_string(n_vars_) +
                                                  " and " + std::to_string(o.n_vars_) + " variables");
  }
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.require_same_vars(b);
  Poly out(a.n_vars_);
  Poly::Monomial e(a.n_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly Poly::derivative(std::size_t i) const {
  Poly out(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(i) == 0) continue;
    Monomial d = e;
    d[i] -= 1;
    out.add_term(d, c * e[i]);
  }
  return out;
}

Poly Poly::substitute(std::span<const Poly> images) const {
  if (images.size() != n_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "substitute: " + std::to_string(images.size()) +
                                                  " images for " + std::to_string(n_vars_) +
                                                  " variables");
  }
  const std::size_t target = images.empty() ? 0 : images[0].n_vars();
  for (const auto& img : images) {
    if (img.n_vars() != target) {
      throw Error(ErrorKind::DimensionMismatch, "substitute: images in different variable counts");
    }
  }
  // powers[i][k] = images[i]^k, grown on demand
  std::vector<std::vector<Poly>> powers(n_vars_);
  for (std::size_t i = 0; i < n_vars_; ++i) {
    powers[i].push_back(Poly::constant(target, Rational(1)));
  }
  Poly out(target);
  for (const auto& [e, c] : terms_) {
    Poly term = Poly::constant(target, c);
    for (std::size_t i = 0; i < n_vars_; ++i) {
      while (powers[i].size() <= e[i]) powers[i].push_back(powers[i].back() * images[i]);
      if (e[i] > 0) term = term * powers[i][e[i]];
    }
    out += term;
  }
  return out;
}

double Poly::evaluate(std::span<const double> point) const {
  if (point.size() != n_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluate: point of length " +
                                                  std::to_string(point.size()) + " for " +
                                                  std::to_string(n_vars_) + " variables");
  }
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t k = 0; k < n_vars_; ++k) {
      for (unsigned p = 0; p < e[k]; ++p) t *= point[k];
    }
    acc += t;
  }
  return acc;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != n_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluate: point of length " +
                                                  std::to_string(point.size()) + " for " +
                                                  std::to_string(n_vars_) + " variables");
  }
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t k = 0; k < n_vars_; ++k) {
      for (unsigned p = 0; p < e[k]; ++p) t *= point[k];
    }
    acc += t;
  }
  return acc;
}

Poly Poly::rounded(double rel) const {
  double scale = 0.0;
  for (const auto& [e, c] : terms_) scale = std::max(scale, std::abs(c.get_d()));
  Poly out(n_vars_);
  for (const auto& [e, c] : terms_) {
    const double v = c.get_d();
    if (std::abs(v) > rel * scale) out.add_term(e, rational_from_double(v));
  }
  return out;
}

std::string variable_name(std::size_t n_vars, std::size_t i) {
  static constexpr const char* kShort[] = {"x", "y", "z"};
  if (n_vars <= 3) return kShort[i];
  return "x" + std::to_string(i + 1);
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  // Highest total degree first; within a degree, reverse lexicographic map order.
  std::vector<std::pair<const Monomial*, const Rational*>> order;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) order.emplace_back(&it->first, &it->second);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    unsigned da = 0, db = 0;
    for (unsigned k : *a.first) da += k;
    for (unsigned k : *b.first) db += k;
    return da > db;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : order) {
    const bool neg = sgn(*c) < 0;
    const Rational mag = abs(*c);
    if (first) {
      if (neg) out << "-";
    } else {
      out << (neg ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    for (std::size_t k = 0; k < n_vars_; ++k) {
      if ((*e)[k] == 0) continue;
      std::string f = variable_name(n_vars_, k);
      if ((*e)[k] > 1) f += "^" + std::to_string((*e)[k]);
      factors.push_back(std::move(f));
    }
    if (factors.empty() || mag != 1) {
      out << mag.get_str();
      if (!factors.empty()) out << "*";
    }
    for (std::size_t k = 0; k < factors.size(); ++k) out << (k ? "*" : "") << factors[k];
  }
  return out.str();
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t n_vars) : text_(text), n_(n_vars) {}

  Poly parse() {
    Poly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, "polynomial '" + std::string(text_) + "' at column " +
                                      std::to_string(pos_ + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly term() {
    Poly acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        const Poly d = unary();
        if (d.degree() != 0 || d.is_zero()) fail("division by a non-constant or zero");
        acc *= Rational(1) / d.coefficient(Poly::Monomial(n_, 0));
      } else {
        return acc;
      }
    }
  }

  Poly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (!accept('^')) return base;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a nonnegative integer exponent");
    const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
    if (e > 64) fail("exponent too large");
    Poly out = Poly::constant(n_, Rational(1));
    for (unsigned long k = 0; k < e; ++k) out = out * base;
    return out;
  }

  Poly atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      // exponent part of a literal such as 1e-3
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      return Poly::constant(n_, parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < n_; ++i) {
        if (name == variable_name(n_, i) || name == "x" + std::to_string(i + 1)) {
          return Poly::variable(n_, i);
        }
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, std::size_t n_vars) {
  return PolyParser(text, n_vars).parse();
}

}  // namespace dirac
