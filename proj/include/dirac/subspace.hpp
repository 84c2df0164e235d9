#pragma once

#include <Eigen/Dense>

#include <vector>

namespace dirac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-9;

/// A linear subspace of R^k stored as an orthonormal basis (columns).
///
/// Equality is projector equality; two subspaces built from different
/// spanning sets compare equal whenever `distance` is within tolerance.
/// The zero subspace has an empty (k x 0) basis.
class Subspace {
 public:
  explicit Subspace(Index ambient_dim = 0, double tol = kDefaultTol);

  static Subspace full(Index ambient_dim, double tol = kDefaultTol);

  /// Column span of `columns`, at relative rank tolerance `tol`.
  static Subspace from_columns(const Matrix& columns, double tol = kDefaultTol);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  double tol() const { return tol_; }

  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim(); }

  Matrix projector() const;

  /// Euclidean distance from v to the subspace.
  double residual(const Vector& v) const;
  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;

 private:
  Matrix basis_;
  double tol_;
};

/// Span of a list of vectors; all must share `ambient_dim`.
Subspace span(const std::vector<Vector>& vectors, Index ambient_dim, double tol = kDefaultTol);

Subspace sum(const Subspace& a, const Subspace& b);
/// Computed as ann(ann(a) + ann(b)).
Subspace intersect(const Subspace& a, const Subspace& b);
/// Annihilator in the dual, identified with R^n through the standard basis.
Subspace annihilator(const Subspace& s);
/// {w : B(w, s) = 0 for all s in S}. Throws FormDegenerate for singular B.
Subspace orthogonal_wrt_form(const Subspace& s, const Matrix& form);
/// Operator norm of the difference of orthogonal projectors, in [0, 1].
double distance(const Subspace& a, const Subspace& b);

/// a (+) b inside R^(ka + kb).
Subspace direct_sum(const Subspace& a, const Subspace& b);
/// Image of s under the linear map `map`.
Subspace image(const Matrix& map, const Subspace& s);
/// Orthonormal basis of ker(m), relative tolerance tol.
Matrix null_space(const Matrix& m, double tol = kDefaultTol);
/// Numerical rank, singular values below tol * sigma_max dropped.
Index numerical_rank(const Matrix& m, double tol = kDefaultTol);

}  // namespace dirac
