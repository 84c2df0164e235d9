#include "dirac/subspace.hpp"

#include "dirac/error.hpp"

#include <algorithm>
#include <string>

namespace dirac {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::FormDegenerate: return "form-degenerate";
    case ErrorKind::NotAntisymmetric: return "not-antisymmetric";
    case ErrorKind::NotLagrangian: return "not-lagrangian";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::DegeneratePoint: return "degenerate-point";
    case ErrorKind::AmbiguousIsotropy: return "ambiguous-isotropy";
    case ErrorKind::InvalidAction: return "invalid-action";
    case ErrorKind::ZeroAlgebra: return "zero-algebra";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Validation: return "validation-error";
    case ErrorKind::UnknownFormat: return "unknown-format";
  }
  return "error";
}

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + ": ambient dimensions " + std::to_string(a.ambient_dim()) +
                    " and " + std::to_string(b.ambient_dim()));
  }
}

}  // namespace

Subspace::Subspace(Index ambient_dim, double tol) : basis_(ambient_dim, 0), tol_(tol) {}

Subspace Subspace::full(Index ambient_dim, double tol) {
  Subspace s(ambient_dim, tol);
  s.basis_ = Matrix::Identity(ambient_dim, ambient_dim);
  return s;
}

Subspace Subspace::from_columns(const Matrix& columns, double tol) {
  Subspace s(columns.rows(), tol);
  if (columns.rows() == 0 || columns.cols() == 0) return s;
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (!(smax > 0.0)) return s;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * smax) ++rank;
  s.basis_ = svd.matrixU().leftCols(rank);
  return s;
}

Matrix Subspace::projector() const { return basis_ * basis_.transpose(); }

double Subspace::residual(const Vector& v) const {
  if (v.size() != ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "residual: vector length " +
                                                  std::to_string(v.size()) + " vs ambient " +
                                                  std::to_string(ambient_dim()));
  }
  if (dim() == 0) return v.norm();
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

bool Subspace::contains(const Vector& v) const {
  return residual(v) <= tol_ * std::max(1.0, v.norm());
}

bool Subspace::contains(const Subspace& other) const {
  require_same_ambient(*this, other, "contains");
  for (Index j = 0; j < other.dim(); ++j) {
    if (!contains(Vector(other.basis().col(j)))) return false;
  }
  return true;
}

Subspace span(const std::vector<Vector>& vectors, Index ambient_dim, double tol) {
  Matrix m(ambient_dim, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != ambient_dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  "span: vector " + std::to_string(j) + " has length " +
                      std::to_string(vectors[j].size()) + ", expected " +
                      std::to_string(ambient_dim));
    }
    m.col(static_cast<Index>(j)) = vectors[j];
  }
  return Subspace::from_columns(m, tol);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "sum");
  Matrix m(a.ambient_dim(), a.dim() + b.dim());
  m << a.basis(), b.basis();
  return Subspace::from_columns(m, std::max(a.tol(), b.tol()));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "intersect");
  return annihilator(sum(annihilator(a), annihilator(b)));
}

Subspace annihilator(const Subspace& s) {
  if (s.dim() == 0) return Subspace::full(s.ambient_dim(), s.tol());
  Matrix kernel = null_space(s.basis().transpose(), s.tol());
  return Subspace::from_columns(kernel, s.tol());
}

Subspace orthogonal_wrt_form(const Subspace& s, const Matrix& form) {
  const Index n = s.ambient_dim();
  if (form.rows() != n || form.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "orthogonal_wrt_form: form is " +
                                                  std::to_string(form.rows()) + "x" +
                                                  std::to_string(form.cols()) + ", ambient " +
                                                  std::to_string(n));
  }
  if (n == 0) return s;
  const double scale = std::max(1.0, form.norm());
  if ((form - form.transpose()).norm() > s.tol() * scale) {
    throw Error(ErrorKind::FormDegenerate, "orthogonal_wrt_form: form is not symmetric");
  }
  Eigen::JacobiSVD<Matrix> svd(form);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(n - 1) <= s.tol() * sv(0)) {
    throw Error(ErrorKind::FormDegenerate, "orthogonal_wrt_form: form is degenerate");
  }
  return annihilator(image(form, s));
}

double distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b, "distance");
  if (a.ambient_dim() == 0) return 0.0;
  const Matrix diff = a.projector() - b.projector();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
  const double d = eig.eigenvalues().cwiseAbs().maxCoeff();
  return std::clamp(d, 0.0, 1.0);
}

Subspace direct_sum(const Subspace& a, const Subspace& b) {
  Matrix m = Matrix::Zero(a.ambient_dim() + b.ambient_dim(), a.dim() + b.dim());
  m.topLeftCorner(a.ambient_dim(), a.dim()) = a.basis();
  m.bottomRightCorner(b.ambient_dim(), b.dim()) = b.basis();
  return Subspace::from_columns(m, std::max(a.tol(), b.tol()));
}

Subspace image(const Matrix& map, const Subspace& s) {
  if (map.cols() != s.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "image: map has " + std::to_string(map.cols()) +
                                                  " columns, subspace ambient " +
                                                  std::to_string(s.ambient_dim()));
  }
  if (s.dim() == 0) return Subspace(map.rows(), s.tol());
  return Subspace::from_columns(map * s.basis(), s.tol());
}

Matrix null_space(const Matrix& m, double tol) {
  const Index c = m.cols();
  if (c == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(c, c);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  Index rank = 0;
  if (smax > 0.0) {
    while (rank < sv.size() && sv(rank) > tol * smax) ++rank;
  }
  return svd.matrixV().rightCols(c - rank);
}

Index numerical_rank(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0)) return 0;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * sv(0)) ++rank;
  return rank;
}

}  // namespace dirac
