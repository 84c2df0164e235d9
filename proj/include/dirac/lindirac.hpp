#pragma once

#include "dirac/subspace.hpp"

namespace dirac {

/// An element (u, alpha) of R^n (+) (R^n)*.
struct SplitVector {
  Vector tangent;
  Vector covector;

  Vector stacked() const;
  static SplitVector from_stacked(const Vector& v);
};

/// <(u, a), (v, b)> = b(u) + a(v).
double pairing(const SplitVector& p, const SplitVector& q);
/// Same pairing on stacked 2n-vectors.
double pairing(const Vector& p, const Vector& q);
/// Gram matrix [[0, I], [I, 0]] of the pairing on R^2n.
Matrix pairing_form(Index n);

/// Largest |<b_i, b_j>| over pairs of basis vectors of a subspace of R^2n.
double max_self_pairing(const Subspace& space);

/// dim == n and the space is self-orthogonal. Throws on odd ambient dimension.
bool is_lagrangian(const Subspace& space);

/// A Lagrangian subspace of R^n (+) (R^n)*; the first n coordinates are
/// tangent, the last n covector.
class LinearDirac {
 public:
  /// Validates; throws NotLagrangian.
  explicit LinearDirac(Subspace space);

  Index base_dim() const { return space_.ambient_dim() / 2; }
  const Subspace& space() const { return space_; }

  /// Basis columns split into tangent (top) and covector (bottom) blocks.
  Matrix tangent_part() const { return space_.basis().topRows(base_dim()); }
  Matrix covector_part() const { return space_.basis().bottomRows(base_dim()); }

 private:
  Subspace space_;
};

/// Graph {(Pi a, a)} of an antisymmetric matrix.
LinearDirac from_bivector(const Matrix& bivector, double tol = kDefaultTol);
/// Graph {(v, i_v Omega)}; the covector of e_i is row i of Omega.
LinearDirac from_two_form(const Matrix& two_form, double tol = kDefaultTol);
/// Delta (+) ann(Delta).
LinearDirac from_distribution(const Subspace& distribution);

/// Pullback along phi : R^m -> R^n (an n x m matrix) of a Dirac space on R^n.
LinearDirac backward_image(const Matrix& phi, const LinearDirac& d);

/// Push-forward result. Non-surjective maps are allowed and reported.
struct ForwardImage {
  Subspace space;
  bool surjective = true;
  bool lagrangian = true;

  /// Throws NotLagrangian when `lagrangian` is false.
  LinearDirac dirac() const;
};

/// {(phi v, b) : (v, phi^T b) in D} for phi : R^m -> R^n and D on R^m.
ForwardImage forward_image(const Matrix& phi, const LinearDirac& d);

/// Image under (v, a) -> (g v, g^{-T} a).
LinearDirac transform(const Matrix& g, const LinearDirac& d);

inline double distance(const LinearDirac& a, const LinearDirac& b) {
  return distance(a.space(), b.space());
}

}  // namespace dirac
