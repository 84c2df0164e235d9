#pragma once

#include "dirac/action.hpp"
#include "dirac/calculus.hpp"
#include "dirac/lindirac.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dirac {

using PolyMatrix = std::vector<std::vector<Poly>>;

/// Global description of a Dirac structure on R^n.
class DiracFieldSpec {
 public:
  struct Bivector {
    PolyMatrix entries;
  };
  struct TwoForm {
    PolyTwoForm omega;
  };
  struct Distribution {
    Subspace delta;
  };
  /// Explicit generating sections; `basepoint` must be a point where they span a
  /// Lagrangian fiber (the declared smooth locus).
  struct Sections {
    std::vector<PolySection> sections;
    std::vector<double> basepoint;
  };
  using Variant = std::variant<Bivector, TwoForm, Distribution, Sections>;

  /// Validates antisymmetry, dimensions and, for sections, the basepoint rank.
  DiracFieldSpec(std::size_t n, Variant value, double tol = kDefaultTol);

  std::size_t dim() const { return n_; }
  const Variant& value() const { return value_; }
  std::string kind() const;
  double tol() const { return tol_; }

 private:
  std::size_t n_;
  Variant value_;
  double tol_;
};

/// Canonical spanning sections: (Pi e_i*, e_i*) for a bivector, (e_i, i_{e_i} Omega)
/// for a two-form, constant sections of Delta (+) ann(Delta) for a distribution.
std::vector<PolySection> generating_sections(const DiracFieldSpec& spec);

/// Fiber D(m). Throws DegeneratePoint when the sections drop rank at m.
LinearDirac evaluate(const DiracFieldSpec& spec, std::span<const double> point);
inline LinearDirac evaluate(const DiracFieldSpec& spec, const Vector& point) {
  return evaluate(spec, std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

/// A section value that failed to lie in D(point).
struct ClosureFailure {
  std::string label;  // "(i, j)" for bracket pairs, "xi=1, s=i" for invariance
  std::vector<double> point;
  double residual = 0.0;
};

struct ClosureReport {
  bool pass = true;
  std::size_t checks = 0;
  double max_residual = 0.0;
  std::vector<ClosureFailure> failures;
};

/// Courant brackets of all pairs of generating sections must lie in D at every sample.
ClosureReport integrability_check(const DiracFieldSpec& spec, const std::vector<Vector>& samples,
                                  double tol);

/// (L_xi X, L_xi alpha) must lie in D for the circle generator xi and every
/// generating section. Passes vacuously for purely finite groups.
ClosureReport infinitesimal_invariance(const DiracFieldSpec& spec, const ActionSpec& action,
                                       const std::vector<Vector>& samples, double tol);

/// g . D(m) must equal D(g m) for every finite element g (the discrete part of
/// G-invariance that the Lie algebra cannot see).
ClosureReport finite_invariance(const DiracFieldSpec& spec, const ActionSpec& action,
                                const std::vector<Vector>& samples, double tol);

}  // namespace dirac
