#include "dirac/reduce.hpp"

#include "dirac/error.hpp"

#include <cmath>
#include <sstream>

namespace dirac {

namespace {

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Everything the pipelines need at one point, computed once.
struct PointData {
  IsotropyDescriptor isotropy;
  Matrix averager;
  Subspace fixed;       // T_G(m) = Fix(G_m)
  Subspace vertical;    // V(m)
  Subspace v_ann;       // V°(m)
  Subspace v_g_ann;     // V_G°(m)
  Subspace orbit_type;  // T(m) = T_G + V
  LinearDirac fiber;    // D(m)
};

PointData point_data(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m, double tol) {
  if (static_cast<std::size_t>(action.n) != d.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "action on R^" + std::to_string(action.n) +
                                                  ", Dirac field on R^" + std::to_string(d.dim()));
  }
  IsotropyDescriptor h = isotropy(action, m, tol);
  Matrix p = average_projector(h, action);
  Subspace fixed = Subspace::from_columns(p, tol);
  Subspace vertical = vertical_space(action, m, tol);
  Subspace v_ann = annihilator(vertical);
  Subspace v_g_ann = image(p.transpose(), v_ann);
  Subspace orbit_type = sum(fixed, vertical);
  LinearDirac fiber = evaluate(d, m);
  return {std::move(h),      std::move(p),          std::move(fixed), std::move(vertical),
          std::move(v_ann),  std::move(v_g_ann),    std::move(orbit_type), std::move(fiber)};
}

LinearDirac pull_to_stratum(const PointData& pd) {
  return backward_image(pd.fixed.basis(), pd.fiber);
}

}  // namespace

QuotientModel QuotientModel::build(const Vector& m, const Subspace& total, const Subspace& vertical) {
  if (!total.contains(vertical)) {
    throw Error(ErrorKind::InternalConsistency, "quotient model: vertical space is not inside the total space");
  }
  QuotientModel q{m, total, vertical, intersect(total, annihilator(vertical)), Matrix()};
  q.projection = q.representative.basis().transpose();
  if (q.representative.dim() + vertical.dim() != total.dim()) {
    throw Error(ErrorKind::InternalConsistency, "quotient model: representative (+) vertical != total");
  }
  return q;
}

Subspace k_perp(const ActionSpec& action, const Vector& m, double tol) {
  return direct_sum(Subspace::full(action.n, tol), v_annihilator(action, m, tol));
}

Subspace stratum_vertical(const ActionSpec& action, const Vector& m, double tol) {
  return intersect(vertical_space(action, m, tol), tangent_isotropy_type(action, m, tol));
}

StratumRestriction restrict_to_stratum(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m,
                                       double tol) {
  const PointData pd = point_data(d, action, m, tol);
  return {pd.fixed, pull_to_stratum(pd)};
}

RankRow rank_row(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m, double tol) {
  const PointData pd = point_data(d, action, m, tol);
  const Index n = action.n;
  const Subspace& dm = pd.fiber.space();

  RankRow row;
  row.isotropy = pd.isotropy;
  row.dim_v = pd.vertical.dim();
  row.dim_v_ann = pd.v_ann.dim();
  row.dim_v_g_ann = pd.v_g_ann.dim();
  row.dim_t_g = pd.fixed.dim();
  row.dim_t = pd.orbit_type.dim();
  row.dim_d_k_perp = intersect(dm, direct_sum(Subspace::full(n, tol), pd.v_ann)).dim();
  row.dim_d_t_vg = intersect(dm, direct_sum(pd.orbit_type, pd.v_g_ann)).dim();
  row.dim_d_tq_vg = intersect(dm, direct_sum(pd.fixed, pd.v_g_ann)).dim();

  const Matrix& eq = pd.fixed.basis();
  const LinearDirac dq = pull_to_stratum(pd);
  const Subspace vq = image(eq.transpose(), intersect(pd.vertical, pd.fixed));
  const Subspace kq_perp = direct_sum(Subspace::full(eq.cols(), tol), annihilator(vq));
  row.dim_dq_kq_perp = intersect(dq.space(), kq_perp).dim();
  row.iq_identity = row.dim_dq_kq_perp == row.dim_d_tq_vg;
  return row;
}

std::vector<RankClass> rank_classes(const std::vector<std::optional<RankRow>>& rows) {
  std::vector<RankClass> classes;
  std::vector<const RankRow*> firsts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) continue;
    const RankRow& r = *rows[i];
    std::size_t c = 0;
    while (c < classes.size() && !same_isotropy(classes[c].isotropy, r.isotropy)) ++c;
    if (c == classes.size()) {
      classes.push_back({r.isotropy, {}});
      firsts.push_back(&r);
    }
    RankClass& cls = classes[c];
    const RankRow& f = *firsts[c];
    cls.members.push_back(i);
    cls.constant_d_k_perp = cls.constant_d_k_perp && r.dim_d_k_perp == f.dim_d_k_perp;
    cls.constant_d_t_vg = cls.constant_d_t_vg && r.dim_d_t_vg == f.dim_d_t_vg;
    cls.constant_d_tq_vg = cls.constant_d_tq_vg && r.dim_d_tq_vg == f.dim_d_tq_vg;
    cls.constant_dq_kq_perp = cls.constant_dq_kq_perp && r.dim_dq_kq_perp == f.dim_dq_kq_perp;
  }
  return classes;
}

RankReport rank_report(const DiracFieldSpec& d, const ActionSpec& action, const std::vector<Vector>& samples,
                       double tol) {
  RankReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      report.rows.emplace_back(rank_row(d, action, samples[i], tol));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AmbiguousIsotropy && e.kind() != ErrorKind::DegeneratePoint) throw;
      report.rows.emplace_back(std::nullopt);
      report.skipped.push_back({i, e.what()});
    }
  }
  report.classes = rank_classes(report.rows);
  return report;
}

LinearDirac Reduction::dirac() const {
  if (!lagrangian) {
    throw Error(ErrorKind::NotLagrangian, "reduced space of dimension " + std::to_string(space.dim()) +
                                              " on a " + std::to_string(model.dim()) +
                                              "-dimensional quotient is not Dirac");
  }
  return LinearDirac(space);
}

Reduction reduce_isotropy_route(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m,
                                double tol) {
  const PointData pd = point_data(d, action, m, tol);
  const LinearDirac dq = pull_to_stratum(pd);
  QuotientModel model = QuotientModel::build(m, pd.fixed, intersect(pd.vertical, pd.fixed));
  const Matrix phi = model.projection * pd.fixed.basis();
  ForwardImage fwd = forward_image(phi, dq);
  return {std::move(model), std::move(fwd.space), fwd.lagrangian};
}

Reduction reduce_orbit_route(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m,
                             double tol) {
  const PointData pd = point_data(d, action, m, tol);
  QuotientModel model = QuotientModel::build(m, pd.orbit_type, pd.vertical);
  const Subspace s = intersect(pd.fiber.space(), direct_sum(pd.orbit_type, pd.v_g_ann));

  const Index n = action.n;
  const Matrix& vb = pd.vertical.basis();
  for (Index k = 0; k < s.dim(); ++k) {
    const Vector alpha = s.basis().col(k).tail(n);
    const double leak = vb.cols() ? (vb.transpose() * alpha).norm() : 0.0;
    if (leak > std::sqrt(tol)) {
      std::ostringstream msg;
      msg << "orbit route: covector of D /\\ (T + V_G°) does not annihilate V (|alpha(V)| = " << leak << ")";
      throw Error(ErrorKind::InternalConsistency, msg.str());
    }
  }
  const Matrix push = block_diag(model.projection, model.projection);
  Subspace reduced = s.dim() ? Subspace::from_columns(push * s.basis(), tol) : Subspace(2 * model.dim(), tol);
  const bool lag = is_lagrangian(reduced);
  return {std::move(model), std::move(reduced), lag};
}

Comparison compare_routes(const Reduction& a, const Reduction& b, double tol) {
  Comparison out;
  const Index r = a.model.dim();
  if (r != b.model.dim() || a.model.representative.ambient_dim() != b.model.representative.ambient_dim()) {
    return out;
  }
  if (r == 0) {
    out.distance = 0.0;
    out.agree = true;
    return out;
  }
  // Inclusion Fix(G_m) -> T(m) descends to Fix/V_Q -> T/V; in representative
  // coordinates it is the orthogonal projection onto b's representative.
  const Matrix iso = b.model.representative.basis().transpose() * a.model.representative.basis();
  if (numerical_rank(iso, a.space.tol()) < r) {
    throw Error(ErrorKind::InternalConsistency, "quotient models are not isomorphic through inclusion");
  }
  const Subspace moved = image(block_diag(iso, iso.inverse().transpose()), a.space);
  out.distance = distance(moved, b.space);
  out.agree = a.lagrangian && b.lagrangian && out.distance <= tol;
  return out;
}

Comparison compare_routes(const DiracFieldSpec& d, const ActionSpec& action, const Vector& m, double tol,
                          double rank_tol) {
  return compare_routes(reduce_isotropy_route(d, action, m, rank_tol), reduce_orbit_route(d, action, m, rank_tol),
                        tol);
}

}  // namespace dirac
