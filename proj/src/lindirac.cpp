#include "dirac/lindirac.hpp"

#include "dirac/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dirac {

namespace {

// Self-pairing of an orthonormal basis is O(1); values below this are rounding.
double pairing_threshold(const Subspace& s) { return std::max(s.tol(), 1e-12); }

void require_antisymmetric(const Matrix& m, double tol, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": matrix is not square");
  }
  if ((m + m.transpose()).norm() > tol * std::max(1.0, m.norm())) {
    throw Error(ErrorKind::NotAntisymmetric, std::string(what) + ": matrix is not antisymmetric");
  }
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

Vector SplitVector::stacked() const {
  Vector v(tangent.size() + covector.size());
  v << tangent, covector;
  return v;
}

SplitVector SplitVector::from_stacked(const Vector& v) {
  if (v.size() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "split vector of odd length " + std::to_string(v.size()));
  }
  const Index n = v.size() / 2;
  return {v.head(n), v.tail(n)};
}

double pairing(const SplitVector& p, const SplitVector& q) {
  const Index n = p.tangent.size();
  if (p.covector.size() != n || q.tangent.size() != n || q.covector.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "pairing: parts of unequal length");
  }
  return q.covector.dot(p.tangent) + p.covector.dot(q.tangent);
}

double pairing(const Vector& p, const Vector& q) {
  if (p.size() != q.size() || p.size() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "pairing: stacked lengths " +
                                                  std::to_string(p.size()) + " and " +
                                                  std::to_string(q.size()));
  }
  return pairing(SplitVector::from_stacked(p), SplitVector::from_stacked(q));
}

Matrix pairing_form(Index n) {
  Matrix b = Matrix::Zero(2 * n, 2 * n);
  b.topRightCorner(n, n) = Matrix::Identity(n, n);
  b.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return b;
}

double max_self_pairing(const Subspace& space) {
  if (space.ambient_dim() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "odd ambient dimension " + std::to_string(space.ambient_dim()));
  }
  if (space.dim() == 0) return 0.0;
  const Matrix& b = space.basis();
  const Matrix gram = b.transpose() * pairing_form(space.ambient_dim() / 2) * b;
  return gram.cwiseAbs().maxCoeff();
}

bool is_lagrangian(const Subspace& space) {
  const double defect = max_self_pairing(space);
  return space.dim() == space.ambient_dim() / 2 && defect <= pairing_threshold(space);
}

LinearDirac::LinearDirac(Subspace space) : space_(std::move(space)) {
  if (!is_lagrangian(space_)) {
    throw Error(ErrorKind::NotLagrangian,
                "subspace of dimension " + std::to_string(space_.dim()) + " in R^" +
                    std::to_string(space_.ambient_dim()) + " with self-pairing defect " +
                    std::to_string(max_self_pairing(space_)));
  }
}

LinearDirac from_bivector(const Matrix& bivector, double tol) {
  require_antisymmetric(bivector, tol, "from_bivector");
  const Index n = bivector.rows();
  Matrix graph(2 * n, n);
  graph << bivector, Matrix::Identity(n, n);
  return LinearDirac(Subspace::from_columns(graph, tol));
}

LinearDirac from_two_form(const Matrix& two_form, double tol) {
  require_antisymmetric(two_form, tol, "from_two_form");
  const Index n = two_form.rows();
  Matrix graph(2 * n, n);
  graph << Matrix::Identity(n, n), two_form.transpose();
  return LinearDirac(Subspace::from_columns(graph, tol));
}

LinearDirac from_distribution(const Subspace& distribution) {
  return LinearDirac(direct_sum(distribution, annihilator(distribution)));
}

LinearDirac backward_image(const Matrix& phi, const LinearDirac& d) {
  const Index n = d.base_dim();
  const Index m = phi.cols();
  if (phi.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "backward_image: map has " +
                                                  std::to_string(phi.rows()) +
                                                  " rows, Dirac base dimension " + std::to_string(n));
  }
  const double tol = d.space().tol();
  // (v, b) with (phi v, b) in D, i.e. orthogonal to the complement of D.
  const Matrix complement = annihilator(d.space()).basis();
  const Matrix lift = block_diag(phi, Matrix::Identity(n, n));
  const Matrix kernel = null_space(complement.transpose() * lift, tol);
  const Matrix push = block_diag(Matrix::Identity(m, m), phi.transpose());
  return LinearDirac(Subspace::from_columns(push * kernel, tol));
}

LinearDirac ForwardImage::dirac() const {
  if (!lagrangian) {
    throw Error(ErrorKind::NotLagrangian,
                std::string("forward image is not Lagrangian") +
                    (surjective ? "" : " (map is not surjective)"));
  }
  return LinearDirac(space);
}

ForwardImage forward_image(const Matrix& phi, const LinearDirac& d) {
  const Index m = d.base_dim();
  const Index n = phi.rows();
  if (phi.cols() != m) {
    throw Error(ErrorKind::DimensionMismatch, "forward_image: map has " +
                                                  std::to_string(phi.cols()) +
                                                  " columns, Dirac base dimension " + std::to_string(m));
  }
  const double tol = d.space().tol();
  const Matrix complement = annihilator(d.space()).basis();
  const Matrix lift = block_diag(Matrix::Identity(m, m), phi.transpose());
  const Matrix kernel = null_space(complement.transpose() * lift, tol);
  const Matrix push = block_diag(phi, Matrix::Identity(n, n));

  ForwardImage out{Subspace::from_columns(push * kernel, tol)};
  out.surjective = numerical_rank(phi, tol) == n;
  out.lagrangian = is_lagrangian(out.space);
  return out;
}

LinearDirac transform(const Matrix& g, const LinearDirac& d) {
  const Index n = d.base_dim();
  if (g.rows() != n || g.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "transform: matrix is " + std::to_string(g.rows()) +
                                                  "x" + std::to_string(g.cols()) +
                                                  ", base dimension " + std::to_string(n));
  }
  if (n == 0) return d;
  if (numerical_rank(g, d.space().tol()) < n) {
    throw Error(ErrorKind::SingularMatrix, "transform: matrix is singular");
  }
  const Matrix inv_t = g.inverse().transpose();
  return LinearDirac(image(block_diag(g, inv_t), d.space()));
}

}  // namespace dirac
