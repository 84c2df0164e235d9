#pragma once

#include "dirac/calculus.hpp"
#include "dirac/subspace.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dirac {

/// A finite group of orthogonal n x n matrices, identity included.
struct FiniteGroupRep {
  std::vector<Matrix> elements;

  static FiniteGroupRep trivial(Index n) { return {{Matrix::Identity(n, n)}}; }
  std::size_t order() const { return elements.size(); }
  /// Index of the element equal to g within tol, if any.
  std::optional<std::size_t> find(const Matrix& g, double tol) const;
};

/// Circle acting on R^(2k + l): rotation blocks at angles w_j * theta on the
/// first 2k coordinates, identity on the last l.
struct CircleFactor {
  std::vector<int> weights;
  std::size_t fixed_dim = 0;

  std::size_t dim() const { return 2 * weights.size() + fixed_dim; }
  int max_weight() const;
  /// Infinitesimal generator A = diag(w_j J, 0_l), J = [[0, -1], [1, 0]].
  Matrix generator() const;
  /// exp(theta A).
  Matrix rotation(double theta) const;
  /// Exact Haar average of exp(theta A): zero on rotation blocks, identity on the fixed block.
  Matrix average() const;
};

struct ActionSpec {
  Index n = 0;
  FiniteGroupRep finite;
  std::optional<CircleFactor> circle;

  std::size_t identity_index(double tol = kDefaultTol) const;
};

/// Every violated invariant, as human-readable lines. Empty when valid.
std::vector<std::string> action_violations(const ActionSpec& spec, double tol = kDefaultTol);
/// Returns the spec unchanged or throws InvalidAction listing all violations.
const ActionSpec& validate_action(const ActionSpec& spec, double tol = kDefaultTol);

/// One component of an isotropy subgroup: finite element times a circle angle.
struct IsotropyElement {
  std::size_t finite_index = 0;
  double angle = 0.0;  // in [0, 2 pi)
};

struct IsotropyDescriptor {
  /// The whole circle fixes the point.
  bool continuous_circle = false;
  /// Sorted by (finite_index, angle). When continuous_circle is set, angles are 0
  /// and the subgroup is {elements} x S^1.
  std::vector<IsotropyElement> elements;

  std::size_t size() const { return elements.size(); }
};

bool same_isotropy(const IsotropyDescriptor& a, const IsotropyDescriptor& b, double angle_tol = 1e-6);
std::string to_string(const IsotropyDescriptor& h);

/// Matrix of the group element (finite_index, angle).
Matrix element_matrix(const ActionSpec& spec, const IsotropyElement& e);

/// Exact isotropy subgroup of m. Points whose membership tests fall between
/// tol and sqrt(tol) (relative to |m|) are rejected as ambiguous.
IsotropyDescriptor isotropy(const ActionSpec& spec, const Vector& m, double tol = kDefaultTol);

/// Haar average of the representation over H: the orthogonal projector onto Fix(H).
Matrix average_projector(const IsotropyDescriptor& h, const ActionSpec& spec);
/// Same average with the circle integral replaced by an N-node uniform rule.
Matrix average_projector_quadrature(const IsotropyDescriptor& h, const ActionSpec& spec, int nodes);
Subspace fixed_subspace(const IsotropyDescriptor& h, const ActionSpec& spec, double tol = kDefaultTol);

/// Linear field m -> xi * A m. Throws ZeroAlgebra without a circle factor.
PolyVectorField fundamental_vector_field(const ActionSpec& spec, const Rational& xi);

Subspace vertical_space(const ActionSpec& spec, const Vector& m, double tol = kDefaultTol);
Subspace v_annihilator(const ActionSpec& spec, const Vector& m, double tol = kDefaultTol);
/// The G_m-invariant part of ann(V(m)).
Subspace v_G_annihilator(const ActionSpec& spec, const Vector& m, double tol = kDefaultTol);
/// Fix(G_m): tangent space of the isotropy-type manifold through m.
Subspace tangent_isotropy_type(const ActionSpec& spec, const Vector& m, double tol = kDefaultTol);
/// Fix(G_m) + V(m): tangent space of the orbit-type manifold through m.
Subspace tangent_orbit_type(const ActionSpec& spec, const Vector& m, double tol = kDefaultTol);

/// Smallest node count at which the circle quadrature is exact for integrands of
/// polynomial degree `degree`: 2 * (max|w| * degree + 1).
int default_quadrature_nodes(const ActionSpec& spec, unsigned degree);

template <typename T>
struct HaarAverage {
  T value;
  int nodes = 0;
  /// False when the node count is below the exactness threshold.
  bool exact = true;
};

/// nodes <= 0 selects default_quadrature_nodes.
HaarAverage<Poly> haar_average_function(const Poly& f, const ActionSpec& spec, int nodes = 0);
HaarAverage<PolyVectorField> haar_average_field(const PolyVectorField& x, const ActionSpec& spec,
                                                int nodes = 0);
HaarAverage<PolyOneForm> haar_average_oneform(const PolyOneForm& alpha, const ActionSpec& spec,
                                              int nodes = 0);

}  // namespace dirac
