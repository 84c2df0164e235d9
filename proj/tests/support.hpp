#pragma once

// Shared generators and independent oracles. The oracles deliberately use
// LU-based kernels and principal angles rather than the library's SVD paths.

#include "dirac/dirac.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <random>

namespace dirac::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

inline Matrix random_antisymmetric(std::mt19937_64& rng, Index n) {
  Matrix a = random_matrix(rng, n, n);
  return a - a.transpose();
}

inline Matrix random_orthogonal(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ();
}

/// A random Lagrangian subspace: a random graph transported by a random
/// orthogonal g, so that non-graph positions occur too.
inline LinearDirac random_dirac(std::mt19937_64& rng, Index n) {
  std::uniform_int_distribution<int> kind(0, 2);
  LinearDirac d = from_bivector(Matrix::Zero(n, n));
  switch (kind(rng)) {
    case 0: d = from_bivector(random_antisymmetric(rng, n)); break;
    case 1: d = from_two_form(random_antisymmetric(rng, n)); break;
    default: {
      std::uniform_int_distribution<Index> k(0, n);
      d = from_distribution(Subspace::from_columns(random_matrix(rng, n, k(rng))));
    }
  }
  return transform(random_orthogonal(rng, n), d);
}

/// Kernel by full-pivot LU.
inline Matrix lu_kernel(const Matrix& m) {
  // The LU threshold is relative; an all-round-off matrix would otherwise count as full rank.
  if (m.rows() == 0 || m.cwiseAbs().maxCoeff() < 1e-12) return Matrix::Identity(m.cols(), m.cols());
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  if (lu.rank() == m.cols()) return Matrix(m.cols(), 0);
  return lu.kernel();
}

inline Index lu_rank(const Matrix& m) {
  if (m.cols() == 0 || m.rows() == 0 || m.cwiseAbs().maxCoeff() < 1e-12) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  return lu.rank();
}

/// sin of the largest principal angle between equal-dimensional column spans.
inline double principal_distance(const Matrix& a, const Matrix& b) {
  if (lu_rank(a) != lu_rank(b)) return 1.0;
  if (lu_rank(a) == 0) return 0.0;
  Eigen::ColPivHouseholderQR<Matrix> qa(a), qb(b);  // pivoting: leading Q columns span the image
  const Index k = lu_rank(a);
  const Matrix oa = qa.householderQ() * Matrix::Identity(a.rows(), k);
  const Matrix ob = qb.householderQ() * Matrix::Identity(b.rows(), k);
  // Largest sine = norm of the part of ob outside span(oa); avoids sqrt(1 - cos^2) cancellation.
  Eigen::JacobiSVD<Matrix> svd(ob - oa * (oa.transpose() * ob));
  return std::min(1.0, svd.singularValues()(0));
}

/// Oracle: {(v, phi^T b) : (phi v, b) in D}, by solving [phi v; b] = B c directly.
inline Matrix oracle_backward(const Matrix& phi, const Matrix& d_basis) {
  const Index n = phi.rows(), m = phi.cols(), k = d_basis.cols();
  Matrix sys = Matrix::Zero(2 * n, m + n + k);
  sys.block(0, 0, n, m) = phi;
  sys.block(n, m, n, n) = Matrix::Identity(n, n);
  sys.block(0, m + n, 2 * n, k) = -d_basis;
  const Matrix ker = lu_kernel(sys);
  Matrix out(2 * m, ker.cols());
  out.topRows(m) = ker.topRows(m);
  out.bottomRows(m) = phi.transpose() * ker.middleRows(m, n);
  return out;
}

/// Oracle: {(phi v, b) : (v, phi^T b) in D}.
inline Matrix oracle_forward(const Matrix& phi, const Matrix& d_basis) {
  const Index n = phi.rows(), m = phi.cols(), k = d_basis.cols();
  Matrix sys = Matrix::Zero(2 * m, m + n + k);
  sys.block(0, 0, m, m) = Matrix::Identity(m, m);
  sys.block(m, m, m, n) = phi.transpose();
  sys.block(0, m + n, 2 * m, k) = -d_basis;
  const Matrix ker = lu_kernel(sys);
  Matrix out(2 * n, ker.cols());
  out.topRows(n) = phi * ker.topRows(m);
  out.bottomRows(n) = ker.middleRows(m, n);
  return out;
}

/// Oracle for Lagrangian: B^T J B = 0 with J the split pairing, and rank n.
inline bool oracle_lagrangian(const Matrix& b, double tol = 1e-9) {
  const Index n = b.rows() / 2;
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return lu_rank(b) == n && (b.transpose() * j * b).cwiseAbs().maxCoeff() <= tol * std::max(1.0, b.squaredNorm());
}

inline Poly random_poly(std::mt19937_64& rng, std::size_t n, unsigned max_degree, int terms = 4) {
  std::uniform_int_distribution<unsigned> e(0, max_degree);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  Poly p(n);
  for (int t = 0; t < terms; ++t) {
    Poly::Monomial mono(n, 0);
    unsigned budget = e(rng);
    for (std::size_t i = 0; i < n && budget; ++i) {
      std::uniform_int_distribution<unsigned> take(0, budget);
      mono[i] = take(rng);
      budget -= mono[i];
    }
    Rational c(num(rng), den(rng));
    c.canonicalize();
    p.add_term(mono, c);
  }
  return p;
}

inline PolySection random_section(std::mt19937_64& rng, std::size_t n, unsigned deg) {
  PolySection s = PolySection::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.field.components[i] = random_poly(rng, n, deg);
    s.form.components[i] = random_poly(rng, n, deg);
  }
  return s;
}

inline PolyVectorField random_field(std::mt19937_64& rng, std::size_t n, unsigned deg) {
  return random_section(rng, n, deg).field;
}

inline PolyMatrix parse_matrix(std::initializer_list<std::initializer_list<const char*>> rows, std::size_t n) {
  PolyMatrix m;
  for (auto row : rows) {
    std::vector<Poly> r;
    for (const char* e : row) r.push_back(parse_poly(e, n));
    m.push_back(std::move(r));
  }
  return m;
}

inline ActionSpec circle_action(std::vector<int> weights, std::size_t fixed = 0) {
  const Index n = static_cast<Index>(2 * weights.size() + fixed);
  return ActionSpec{n, FiniteGroupRep::trivial(n), CircleFactor{std::move(weights), fixed}};
}

inline ActionSpec finite_action(std::vector<Matrix> elements) {
  const Index n = elements.front().rows();
  return ActionSpec{n, FiniteGroupRep{std::move(elements)}, std::nullopt};
}

inline Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

inline Matrix rot(double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

/// Dihedral group of order 2k acting on R^2.
inline std::vector<Matrix> dihedral(int k) {
  std::vector<Matrix> out;
  const double pi = std::acos(-1.0);
  for (int i = 0; i < k; ++i) out.push_back(rot(2 * pi * i / k));
  for (int i = 0; i < k; ++i) out.push_back(rot(2 * pi * i / k) * diag({1, -1}));
  // Snap round-off so exact entries (0, +-1) compare cleanly.
  for (auto& g : out) g = g.unaryExpr([](double x) { return std::abs(x) < 1e-15 ? 0.0 : x; });
  return out;
}

/// Fix(H) oracle: kernel of the stacked (h - I), plus the generator for a continuous circle.
inline Matrix oracle_fixed(const IsotropyDescriptor& h, const ActionSpec& spec) {
  const Index n = spec.n;
  std::vector<Matrix> blocks;
  for (const auto& e : h.elements) blocks.push_back(element_matrix(spec, e) - Matrix::Identity(n, n));
  if (h.continuous_circle) blocks.push_back(spec.circle->generator());
  Matrix stacked(static_cast<Index>(blocks.size()) * n, n);
  for (std::size_t i = 0; i < blocks.size(); ++i) stacked.middleRows(static_cast<Index>(i) * n, n) = blocks[i];
  return lu_kernel(stacked);
}

}  // namespace dirac::testing
