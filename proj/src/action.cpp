#include "dirac/action.hpp"

#include "dirac/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Circle-quadrature coefficients below this fraction of the largest are rounding noise.
constexpr double kQuadratureNoise = 1e-13;

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi - 1e-12) t = 0.0;
  return t;
}

double angle_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

enum class Smallness { Zero, NonZero };

Smallness classify(double q, double scale, double tol, const Vector& m, const char* what) {
  if (q <= tol * scale) return Smallness::Zero;
  if (q >= std::sqrt(tol) * scale) return Smallness::NonZero;
  std::ostringstream msg;
  msg << what << " = " << q << " at point (" << m.transpose()
      << ") is too close to a stratum boundary";
  throw Error(ErrorKind::AmbiguousIsotropy, msg.str());
}

std::vector<Poly> linear_images(const Matrix& g) {
  const auto n = static_cast<std::size_t>(g.rows());
  std::vector<Poly> images;
  for (std::size_t i = 0; i < n; ++i) {
    Poly p(n);
    for (std::size_t j = 0; j < n; ++j) {
      Poly::Monomial e(n, 0);
      e[j] = 1;
      p.add_term(e, rational_from_double(g(static_cast<Index>(i), static_cast<Index>(j))));
    }
    images.push_back(std::move(p));
  }
  return images;
}

// new_i(x) = sum_j g_ji comps_j(g x): pullback of covector fields, and push-forward
// of vector fields by g^{-1} = g^T.
std::vector<Poly> pull_components(const std::vector<Poly>& comps, const Matrix& g) {
  const auto images = linear_images(g);
  std::vector<Poly> moved;
  for (const auto& c : comps) moved.push_back(c.substitute(images));
  const std::size_t n = comps.size();
  std::vector<Poly> out(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double gji = g(static_cast<Index>(j), static_cast<Index>(i));
      if (gji != 0.0) out[i] += moved[j] * rational_from_double(gji);
    }
  }
  return out;
}

// The exact circle average of products of cos(w t), sin(w t) of total degree
// d has denominator dividing 2^d; with the inputs' denominators this bounds the
// denominator of every averaged coefficient.
mpz_class quadrature_grid(const std::vector<Poly>& comps) {
  mpz_class l = 1;
  unsigned degree = 0;
  for (const auto& p : comps) {
    degree = std::max(degree, p.degree());
    for (const auto& [e, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  // Fields and forms pick up one more trig factor from the linear transformation.
  return l << (degree + 1);
}

// Replaces each coefficient by the nearest multiple of 1/grid when the
// quadrature value is unambiguously that rational; otherwise keeps the double.
Poly snap(const Poly& p, const mpz_class& grid) {
  const double g = grid.get_d();
  if (!(g < 0x1p40)) return p;
  Poly out(p.n_vars());
  for (const auto& [e, c] : p.terms()) {
    const double scaled = c.get_d() * g;
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > 1e-6) {
      out.add_term(e, c);
      continue;
    }
    Rational q(mpz_class(static_cast<long>(nearest)), grid);
    q.canonicalize();
    if (q != 0) out.add_term(e, q);
  }
  return out;
}

// Averages a list of polynomials representing one object over the finite group
// (exactly) and then over the circle (N-node rule).
template <typename Move>
std::vector<Poly> group_average(const std::vector<Poly>& comps, const ActionSpec& spec, int nodes,
                                Move move) {
  const std::size_t n = static_cast<std::size_t>(spec.n);
  std::vector<Poly> acc(comps.size(), Poly(n));
  for (const auto& g : spec.finite.elements) {
    const auto moved = move(comps, g);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += moved[i];
  }
  const Rational inv_order(1, static_cast<long>(spec.finite.order()));
  for (auto& p : acc) p *= inv_order;
  if (!spec.circle) return acc;

  std::vector<Poly> circ(comps.size(), Poly(n));
  for (int k = 0; k < nodes; ++k) {
    const auto moved = move(acc, spec.circle->rotation(kTwoPi * k / nodes));
    for (std::size_t i = 0; i < circ.size(); ++i) circ[i] += moved[i];
  }
  const Rational inv_nodes(1, nodes);
  const mpz_class grid = quadrature_grid(acc);
  for (auto& p : circ) p = snap((p * inv_nodes).rounded(kQuadratureNoise), grid);
  return circ;
}

unsigned max_degree(const std::vector<Poly>& comps) {
  unsigned d = 0;
  for (const auto& p : comps) d = std::max(d, p.degree());
  return d;
}

int resolve_nodes(const ActionSpec& spec, unsigned degree, int requested, bool& exact) {
  const int threshold = default_quadrature_nodes(spec, degree);
  const int nodes = requested > 0 ? requested : threshold;
  exact = !spec.circle || nodes >= threshold;
  return nodes;
}

}  // namespace

std::optional<std::size_t> FiniteGroupRep::find(const Matrix& g, double tol) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].rows() == g.rows() && elements[i].cols() == g.cols() &&
        (elements[i] - g).norm() <= tol * std::max(1.0, g.norm())) {
      return i;
    }
  }
  return std::nullopt;
}

int CircleFactor::max_weight() const {
  int w = 0;
  for (int x : weights) w = std::max(w, std::abs(x));
  return w;
}

Matrix CircleFactor::generator() const {
  const auto n = static_cast<Index>(dim());
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const auto b = static_cast<Index>(2 * j);
    a(b, b + 1) = -weights[j];
    a(b + 1, b) = weights[j];
  }
  return a;
}

Matrix CircleFactor::rotation(double theta) const {
  const auto n = static_cast<Index>(dim());
  Matrix r = Matrix::Identity(n, n);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const auto b = static_cast<Index>(2 * j);
    const double c = std::cos(weights[j] * theta);
    const double s = std::sin(weights[j] * theta);
    r(b, b) = c;
    r(b, b + 1) = -s;
    r(b + 1, b) = s;
    r(b + 1, b + 1) = c;
  }
  return r;
}

Matrix CircleFactor::average() const {
  const auto n = static_cast<Index>(dim());
  Matrix c = Matrix::Zero(n, n);
  for (auto i = static_cast<Index>(2 * weights.size()); i < n; ++i) c(i, i) = 1.0;
  return c;
}

std::size_t ActionSpec::identity_index(double tol) const {
  auto idx = finite.find(Matrix::Identity(n, n), tol);
  if (!idx) throw Error(ErrorKind::InvalidAction, "finite group does not contain the identity");
  return *idx;
}

std::vector<std::string> action_violations(const ActionSpec& spec, double tol) {
  std::vector<std::string> out;
  const Index n = spec.n;
  if (n <= 0) out.push_back("dimension must be positive");
  if (spec.finite.elements.empty()) out.push_back("finite group has no elements");
  bool shapes_ok = true;
  for (std::size_t i = 0; i < spec.finite.elements.size(); ++i) {
    const Matrix& g = spec.finite.elements[i];
    if (g.rows() != n || g.cols() != n) {
      out.push_back("finite element " + std::to_string(i) + " is " + std::to_string(g.rows()) + "x" +
                    std::to_string(g.cols()) + ", expected " + std::to_string(n) + "x" +
                    std::to_string(n));
      shapes_ok = false;
      continue;
    }
    const double defect = (g.transpose() * g - Matrix::Identity(n, n)).norm();
    if (defect > tol * n) {
      std::ostringstream msg;
      msg << "finite element " << i << " is not orthogonal (|g^T g - I| = " << defect << ")";
      out.push_back(msg.str());
    }
  }
  if (shapes_ok && !spec.finite.elements.empty()) {
    const auto& els = spec.finite.elements;
    if (!spec.finite.find(Matrix::Identity(n, n), tol)) out.push_back("finite group does not contain the identity");
    for (std::size_t i = 0; i < els.size(); ++i) {
      for (std::size_t j = i + 1; j < els.size(); ++j) {
        if ((els[i] - els[j]).norm() <= tol * std::max<double>(1.0, static_cast<double>(n))) {
          out.push_back("finite elements " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide");
        }
      }
    }
    for (std::size_t i = 0; i < els.size(); ++i) {
      if (!spec.finite.find(els[i].transpose(), tol)) {
        out.push_back("closure: inverse of element " + std::to_string(i) + " is missing");
      }
      for (std::size_t j = 0; j < els.size(); ++j) {
        if (!spec.finite.find(els[i] * els[j], tol)) {
          out.push_back("closure: product of elements " + std::to_string(i) + " * " +
                        std::to_string(j) + " is missing");
        }
      }
    }
  }
  if (spec.circle) {
    const auto& c = *spec.circle;
    if (static_cast<Index>(c.dim()) != n) {
      out.push_back("circle acts on R^" + std::to_string(c.dim()) + " (2 * " +
                    std::to_string(c.weights.size()) + " + " + std::to_string(c.fixed_dim) +
                    "), expected R^" + std::to_string(n));
    } else if (shapes_ok) {
      const Matrix a = c.generator();
      for (std::size_t i = 0; i < spec.finite.elements.size(); ++i) {
        const Matrix& g = spec.finite.elements[i];
        if ((g * a - a * g).norm() > tol * std::max(1.0, a.norm())) {
          out.push_back("finite element " + std::to_string(i) + " does not commute with the circle");
        }
      }
    }
    if (c.weights.empty()) out.push_back("circle has no rotation blocks");
    for (std::size_t j = 0; j < c.weights.size(); ++j) {
      if (c.weights[j] == 0) out.push_back("circle weight " + std::to_string(j) + " is zero");
    }
  }
  return out;
}

const ActionSpec& validate_action(const ActionSpec& spec, double tol) {
  const auto violations = action_violations(spec, tol);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::InvalidAction, msg);
  }
  return spec;
}

bool same_isotropy(const IsotropyDescriptor& a, const IsotropyDescriptor& b, double angle_tol) {
  if (a.continuous_circle != b.continuous_circle || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.elements[i].finite_index != b.elements[i].finite_index) return false;
    if (angle_gap(a.elements[i].angle, b.elements[i].angle) > angle_tol) return false;
  }
  return true;
}

std::string to_string(const IsotropyDescriptor& h) {
  std::ostringstream out;
  out << (h.continuous_circle ? "S1 x {" : "{");
  for (std::size_t i = 0; i < h.size(); ++i) {
    out << (i ? ", " : "") << "(" << h.elements[i].finite_index << ", " << h.elements[i].angle << ")";
  }
  out << "}";
  return out.str();
}

Matrix element_matrix(const ActionSpec& spec, const IsotropyElement& e) {
  const Matrix& f = spec.finite.elements.at(e.finite_index);
  if (!spec.circle) return f;
  return f * spec.circle->rotation(e.angle);
}

IsotropyDescriptor isotropy(const ActionSpec& spec, const Vector& m, double tol) {
  if (m.size() != spec.n) {
    throw Error(ErrorKind::DimensionMismatch, "isotropy: point of length " +
                                                  std::to_string(m.size()) + " in R^" +
                                                  std::to_string(spec.n));
  }
  IsotropyDescriptor h;
  const double norm = m.norm();
  const auto& els = spec.finite.elements;

  if (norm == 0.0) {
    h.continuous_circle = spec.circle.has_value();
    for (std::size_t i = 0; i < els.size(); ++i) h.elements.push_back({i, 0.0});
    return h;
  }

  if (spec.circle) {
    const double scale = spec.circle->max_weight() * norm;
    h.continuous_circle =
        classify((spec.circle->generator() * m).norm(), scale, tol, m, "|A m|") == Smallness::Zero;
  }

  if (!spec.circle || h.continuous_circle) {
    for (std::size_t i = 0; i < els.size(); ++i) {
      if (classify((els[i] * m - m).norm(), norm, tol, m, "|f m - m|") == Smallness::Zero) {
        h.elements.push_back({i, 0.0});
      }
    }
    return h;
  }

  // Solve f R(theta) m = m. Candidate angles come from the rotation block of m
  // with the largest norm; every candidate is then checked on the whole vector.
  const auto& circle = *spec.circle;
  std::size_t pivot = 0;
  double pivot_norm = -1.0;
  for (std::size_t j = 0; j < circle.weights.size(); ++j) {
    const double bn = m.segment(static_cast<Index>(2 * j), 2).norm();
    if (bn > pivot_norm) {
      pivot_norm = bn;
      pivot = j;
    }
  }
  const auto b = static_cast<Index>(2 * pivot);
  const int w = circle.weights[pivot];
  const double base_angle = std::atan2(m(b + 1), m(b));

  for (std::size_t i = 0; i < els.size(); ++i) {
    const Vector target = els[i].transpose() * m;
    const double phi = std::atan2(target(b + 1), target(b)) - base_angle;
    std::vector<double> found;
    for (int k = 0; k < std::abs(w); ++k) {
      const double theta = normalize_angle((phi + kTwoPi * k) / w);
      const double r = (els[i] * circle.rotation(theta) * m - m).norm();
      if (classify(r, norm, tol, m, "|f R(theta) m - m|") == Smallness::Zero) {
        if (std::none_of(found.begin(), found.end(),
                         [&](double t) { return angle_gap(t, theta) < 1e-9; })) {
          found.push_back(theta);
        }
      }
    }
    std::sort(found.begin(), found.end());
    for (double t : found) h.elements.push_back({i, t});
  }
  return h;
}

Matrix average_projector(const IsotropyDescriptor& h, const ActionSpec& spec) {
  const Index n = spec.n;
  Matrix acc = Matrix::Zero(n, n);
  if (h.elements.empty()) {
    throw Error(ErrorKind::InternalConsistency, "isotropy descriptor without elements");
  }
  if (h.continuous_circle) {
    for (const auto& e : h.elements) acc += spec.finite.elements.at(e.finite_index);
    acc /= static_cast<double>(h.size());
    return spec.circle ? Matrix(acc * spec.circle->average()) : acc;
  }
  for (const auto& e : h.elements) acc += element_matrix(spec, e);
  return acc / static_cast<double>(h.size());
}

Matrix average_projector_quadrature(const IsotropyDescriptor& h, const ActionSpec& spec, int nodes) {
  if (!h.continuous_circle || !spec.circle) return average_projector(h, spec);
  if (nodes <= 0) throw Error(ErrorKind::Validation, "quadrature needs a positive node count");
  const Index n = spec.n;
  Matrix finite_avg = Matrix::Zero(n, n);
  for (const auto& e : h.elements) finite_avg += spec.finite.elements.at(e.finite_index);
  finite_avg /= static_cast<double>(h.size());
  Matrix circle_avg = Matrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) circle_avg += spec.circle->rotation(kTwoPi * k / nodes);
  circle_avg /= static_cast<double>(nodes);
  return finite_avg * circle_avg;
}

Subspace fixed_subspace(const IsotropyDescriptor& h, const ActionSpec& spec, double tol) {
  return Subspace::from_columns(average_projector(h, spec), tol);
}

PolyVectorField fundamental_vector_field(const ActionSpec& spec, const Rational& xi) {
  if (!spec.circle) {
    throw Error(ErrorKind::ZeroAlgebra, "action has no continuous part; its Lie algebra is zero");
  }
  const auto n = static_cast<std::size_t>(spec.n);
  const Matrix a = spec.circle->generator();
  PolyVectorField field = PolyVectorField::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double aij = a(static_cast<Index>(i), static_cast<Index>(j));
      if (aij != 0.0) field.components[i] += Poly::variable(n, j) * (xi * rational_from_double(aij));
    }
  }
  return field;
}

Subspace vertical_space(const ActionSpec& spec, const Vector& m, double tol) {
  Subspace zero(spec.n, tol);
  if (!spec.circle) return zero;
  const Vector am = spec.circle->generator() * m;
  if (am.norm() <= tol * spec.circle->max_weight() * m.norm() || am.norm() == 0.0) return zero;
  return span({am}, spec.n, tol);
}

Subspace v_annihilator(const ActionSpec& spec, const Vector& m, double tol) {
  return annihilator(vertical_space(spec, m, tol));
}

Subspace v_G_annihilator(const ActionSpec& spec, const Vector& m, double tol) {
  const Matrix p = average_projector(isotropy(spec, m, tol), spec);
  // The dual action on covectors is g^{-T} = g, so its average is P^T.
  return image(p.transpose(), v_annihilator(spec, m, tol));
}

Subspace tangent_isotropy_type(const ActionSpec& spec, const Vector& m, double tol) {
  return fixed_subspace(isotropy(spec, m, tol), spec, tol);
}

Subspace tangent_orbit_type(const ActionSpec& spec, const Vector& m, double tol) {
  return sum(tangent_isotropy_type(spec, m, tol), vertical_space(spec, m, tol));
}

int default_quadrature_nodes(const ActionSpec& spec, unsigned degree) {
  const int w = spec.circle ? spec.circle->max_weight() : 0;
  return 2 * (w * static_cast<int>(degree) + 1);
}

HaarAverage<Poly> haar_average_function(const Poly& f, const ActionSpec& spec, int nodes) {
  HaarAverage<Poly> out{Poly(f.n_vars())};
  out.nodes = resolve_nodes(spec, f.degree(), nodes, out.exact);
  auto move = [](const std::vector<Poly>& comps, const Matrix& g) {
    const auto images = linear_images(g);
    return std::vector<Poly>{comps[0].substitute(images)};
  };
  out.value = group_average({f}, spec, out.nodes, move)[0];
  return out;
}

HaarAverage<PolyVectorField> haar_average_field(const PolyVectorField& x, const ActionSpec& spec,
                                                int nodes) {
  HaarAverage<PolyVectorField> out;
  // The pushed-forward field gains one degree in the circle angle from the outer matrix.
  out.nodes = resolve_nodes(spec, max_degree(x.components) + 1, nodes, out.exact);
  out.value.components = group_average(x.components, spec, out.nodes, pull_components);
  return out;
}

HaarAverage<PolyOneForm> haar_average_oneform(const PolyOneForm& alpha, const ActionSpec& spec,
                                              int nodes) {
  HaarAverage<PolyOneForm> out;
  out.nodes = resolve_nodes(spec, max_degree(alpha.components) + 1, nodes, out.exact);
  out.value.components = group_average(alpha.components, spec, out.nodes, pull_components);
  return out;
}

}  // namespace dirac
