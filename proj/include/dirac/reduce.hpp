#pragma once

#include "dirac/action.hpp"
#include "dirac/dirac_field.hpp"
#include "dirac/lindirac.hpp"

#include <optional>
#include <vector>

namespace dirac {

/// Linear model of a quotient tangent space at a base point.
///
/// `representative` is the Euclidean complement of `vertical` inside `total`
/// (the Euclidean metric is invariant, so this is the canonical horizontal
/// space). `projection` maps R^n to coordinates in `representative`'s basis;
/// restricted to `total` its kernel is `vertical`.
struct QuotientModel {
  Vector base_point;
  Subspace total;
  Subspace vertical;
  Subspace representative;
  Matrix projection;

  static QuotientModel build(const Vector& m, const Subspace& total, const Subspace& vertical);
  Index dim() const { return representative.dim(); }
};

/// ann(V(m)) inside the ambient, paired with the full tangent space: R^n (+) V°(m).
Subspace k_perp(const ActionSpec& action, const Vector& m, double tol = kDefaultTol);

/// V(m) /\ Fix(G_m): the vertical space of the normalizer action on the stratum.
Subspace stratum_vertical(const ActionSpec& action, const Vector& m, double tol = kDefaultTol);

/// Dirac structure induced on the isotropy-type stratum through m, in the
/// coordinates of fixed_subspace's orthonormal basis.
struct StratumRestriction {
  Subspace stratum;  // Fix(G_m) in R^n
  LinearDirac dirac;
};
StratumRestriction restrict_to_stratum(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m,
                                       double tol = kDefaultTol);

/// Ranks at one point.
struct RankRow {
  IsotropyDescriptor isotropy;
  Index dim_v = 0;
  Index dim_v_ann = 0;
  Index dim_v_g_ann = 0;
  Index dim_t_g = 0;
  Index dim_t = 0;
  Index dim_d_k_perp = 0;            // D /\ (TM (+) V°)
  Index dim_d_t_vg = 0;              // D /\ (T (+) V_G°)
  Index dim_d_tq_vg = 0;             // D /\ (T_Q (+) V_G°)
  Index dim_dq_kq_perp = 0;          // D_Q /\ K_Q^perp
  bool iq_identity = false;          // dim_dq_kq_perp == dim_d_tq_vg
};
RankRow rank_row(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m, double tol = kDefaultTol);

/// A point skipped because its isotropy or fiber could not be classified.
struct SkippedPoint {
  std::size_t index = 0;
  std::string reason;
};

struct RankClass {
  IsotropyDescriptor isotropy;
  std::vector<std::size_t> members;  // indices into the sample list
  bool constant_d_k_perp = true;
  bool constant_d_t_vg = true;
  bool constant_d_tq_vg = true;
  bool constant_dq_kq_perp = true;

  bool constant() const {
    return constant_d_k_perp && constant_d_t_vg && constant_d_tq_vg && constant_dq_kq_perp;
  }
};

struct RankReport {
  std::vector<std::optional<RankRow>> rows;  // one per sample, empty when skipped
  std::vector<SkippedPoint> skipped;
  std::vector<RankClass> classes;
};

/// Per-point ranks plus rank constancy across samples with equal isotropy
/// (sampled evidence only).
RankReport rank_report(const DiracFieldSpec& d, const ActionSpec& action, const std::vector<Vector>& samples,
                       double tol = kDefaultTol);
/// Groups already-computed rows into isotropy classes.
std::vector<RankClass> rank_classes(const std::vector<std::optional<RankRow>>& rows);

struct Reduction {
  QuotientModel model;
  Subspace space;  // in R^r (+) (R^r)*, r = model.dim()
  bool lagrangian = true;

  /// Throws NotLagrangian when the reduced space is not Dirac.
  LinearDirac dirac() const;
};

/// Restrict to the isotropy-type stratum, then push forward along the quotient
/// by the stratum's vertical space.
Reduction reduce_isotropy_route(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m,
                                double tol = kDefaultTol);

/// Push forward D /\ (T (+) V_G°) along the orbit-type quotient.
Reduction reduce_orbit_route(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m,
                             double tol = kDefaultTol);

struct Comparison {
  bool agree = false;
  double distance = 1.0;
};

/// Transports the isotropy-route result to the orbit-route model through the
/// isomorphism induced by inclusion, and measures the distance.
Comparison compare_routes(const Reduction& isotropy_route, const Reduction& orbit_route, double tol);
Comparison compare_routes(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m, double tol,
                          double rank_tol = kDefaultTol);

}  // namespace dirac
