#include "support.hpp"

#include <doctest.h>

using namespace dirac;
using namespace dirac::testing;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

DiracFieldSpec canonical_poisson() {
  return DiracFieldSpec(2, DiracFieldSpec::Bivector{parse_matrix({{"0", "1"}, {"-1", "0"}}, 2)});
}

DiracFieldSpec area_form() {
  return DiracFieldSpec(2, DiracFieldSpec::TwoForm{{parse_matrix({{"0", "1"}, {"-1", "0"}}, 2)}});
}

ActionSpec reflection() { return finite_action({Matrix::Identity(2, 2), diag({1, -1})}); }

// {0} (+) (R^1)*: zero tangent, full cotangent.
Subspace zero_poisson_line() { return span({vec({0, 1})}, 2); }

}  // namespace

TEST_CASE("K-perp examples") {
  CHECK(k_perp(finite_action(dihedral(4)), vec({0.2, 0.9})).is_full());
  const Subspace k = k_perp(circle_action({1}), vec({1, 0}));
  CHECK(k.dim() == 3);
  CHECK(k.contains(vec({0.4, -1, 1, 0})));
  CHECK_FALSE(k.contains(vec({0, 0, 0, 1})));
  CHECK(k_perp(circle_action({1}), vec({0, 0})).dim() == 4);
}

TEST_CASE("restriction to the isotropy stratum") {
  const auto r = restrict_to_stratum(area_form(), reflection(), vec({0.7, 0}));
  CHECK(r.stratum.dim() == 1);
  CHECK(distance(r.dirac.space(), span({vec({1, 0})}, 2)) < 1e-12);

  const auto trivial = restrict_to_stratum(canonical_poisson(), finite_action({Matrix::Identity(2, 2)}), vec({1, 2}));
  CHECK(distance(trivial.dirac, evaluate(canonical_poisson(), vec({1, 2}))) < 1e-12);

  const auto origin = restrict_to_stratum(canonical_poisson(), circle_action({1}), vec({0, 0}));
  CHECK(origin.stratum.dim() == 0);
  CHECK(origin.dirac.space().ambient_dim() == 0);
}

TEST_CASE("rank table examples") {
  std::mt19937_64 rng(50);
  std::vector<Vector> free_pts;
  for (int i = 0; i < 10; ++i) free_pts.push_back(random_matrix(rng, 2, 1) + vec({2, 0}));
  const RankReport circ = rank_report(canonical_poisson(), circle_action({1}), free_pts);
  for (const auto& row : circ.rows) {
    REQUIRE(row);
    CHECK(row->dim_d_k_perp == 1);
    CHECK(row->iq_identity);
  }
  REQUIRE(circ.classes.size() == 1);
  CHECK(circ.classes[0].constant());

  const RankReport triv = rank_report(area_form(), finite_action({Matrix::Identity(2, 2)}), free_pts);
  for (const auto& row : triv.rows) CHECK(row->dim_d_k_perp == 2);

  // I_q sides on the reflection axis, each computed by its own formula.
  const RankRow axis = rank_row(area_form(), reflection(), vec({0.5, 0}));
  CHECK(axis.dim_t_g == 1);
  CHECK(axis.dim_v_g_ann == 1);
  CHECK(axis.dim_dq_kq_perp == 1);
  // D = graph of dx^dy contains no (a e1, b dx) with (a, b) != 0: the area form
  // is not reflection-invariant, so this side is 0 and the identity fails.
  CHECK(axis.dim_d_tq_vg == 0);
  CHECK_FALSE(axis.iq_identity);
}

TEST_CASE("ambiguous points are skipped, not fatal") {
  const std::vector<Vector> pts{vec({1, 0}), vec({1, 1e-6}), vec({1, 1})};
  const ActionSpec a = finite_action({Matrix::Identity(2, 2), diag({-1, -1})});
  const RankReport r = rank_report(area_form(), reflection(), pts);
  CHECK(r.skipped.size() == 1);
  CHECK(r.skipped[0].index == 1);
  CHECK_FALSE(r.rows[1]);
  CHECK(rank_report(area_form(), a, pts).skipped.empty());
}

TEST_CASE("worked example: circle on the canonical Poisson plane") {
  const auto a = reduce_isotropy_route(canonical_poisson(), circle_action({1}), vec({1, 0}));
  const auto b = reduce_orbit_route(canonical_poisson(), circle_action({1}), vec({1, 0}));
  CHECK(a.model.dim() == 1);
  CHECK(b.model.dim() == 1);
  CHECK(a.lagrangian);
  CHECK(b.lagrangian);
  CHECK(distance(a.space, zero_poisson_line()) < 1e-12);
  CHECK(distance(b.space, zero_poisson_line()) < 1e-12);
  const Comparison c = compare_routes(a, b, 1e-8);
  CHECK(c.agree);
  CHECK(c.distance < 1e-12);
}

TEST_CASE("trivial group leaves D unchanged on both routes") {
  const ActionSpec trivial = finite_action({Matrix::Identity(2, 2)});
  const Vector m = vec({0.3, 0.4});
  for (const auto& d : {canonical_poisson(), area_form()}) {
    const LinearDirac dm = evaluate(d, m);
    const auto a = reduce_isotropy_route(d, trivial, m);
    const auto b = reduce_orbit_route(d, trivial, m);
    // Representatives are orthonormal bases of R^2; compare after transport.
    const Matrix ea = a.model.representative.basis();
    CHECK(distance(transform(ea, LinearDirac(a.space)), dm) < 1e-12);
    const Comparison c = compare_routes(d, trivial, m, 1e-8);
    CHECK(c.agree);
    CHECK(c.distance < 1e-12);
    CHECK(b.dirac().space().dim() == 2);
  }
}

TEST_CASE("reflection and area form: the routes split") {
  // Route A: D_Q = R (+) 0 on the axis, no vertical part, so it is the result.
  const auto a = reduce_isotropy_route(area_form(), reflection(), vec({0.5, 0}));
  CHECK(a.lagrangian);
  CHECK(distance(a.space, span({vec({1, 0})}, 2)) < 1e-12);
  // Route B: D /\ (x-axis (+) span{dx}) = {0}.
  const auto b = reduce_orbit_route(area_form(), reflection(), vec({0.5, 0}));
  CHECK(b.space.dim() == 0);
  CHECK_FALSE(b.lagrangian);
  CHECK_THROWS_AS(b.dirac(), Error);
  CHECK_FALSE(compare_routes(a, b, 1e-8).agree);
}

TEST_CASE("property: routes agree for invariant structures") {
  std::mt19937_64 rng(51);
  struct Case {
    DiracFieldSpec d;
    ActionSpec a;
  };
  ActionSpec z2_circle = circle_action({1}, 1);
  z2_circle.finite = FiniteGroupRep{{Matrix::Identity(3, 3), diag({1, 1, -1})}};
  std::vector<Case> cases{
      {canonical_poisson(), circle_action({1})},
      {DiracFieldSpec(2, DiracFieldSpec::Bivector{parse_matrix({{"0", "1 + x^2 + y^2"}, {"-1 - x^2 - y^2", "0"}}, 2)}),
       circle_action({2})},
      {DiracFieldSpec(3, DiracFieldSpec::TwoForm{{parse_matrix({{"0", "1 + x^2 + y^2", "0"}, {"-1 - x^2 - y^2", "0", "0"}, {"0", "0", "0"}}, 3)}}),
       z2_circle},
      {DiracFieldSpec(3, DiracFieldSpec::Bivector{parse_matrix({{"0", "z^2", "0"}, {"-z^2", "0", "0"}, {"0", "0", "0"}}, 3)}),
       z2_circle},
      {DiracFieldSpec(2, DiracFieldSpec::Distribution{Subspace::full(2)}), finite_action(dihedral(4))},
      {DiracFieldSpec(2, DiracFieldSpec::TwoForm{{parse_matrix({{"0", "1"}, {"-1", "0"}}, 2)}}),
       finite_action({Matrix::Identity(2, 2), diag({-1, -1})})},
      {DiracFieldSpec(4, DiracFieldSpec::Bivector{parse_matrix({{"0", "1", "0", "0"}, {"-1", "0", "0", "0"}, {"0", "0", "0", "1"}, {"0", "0", "-1", "0"}}, 4)}),
       circle_action({1, 2})},
  };
  for (const auto& c : cases) {
    for (int t = 0; t < 12; ++t) {
      Vector m = random_matrix(rng, c.a.n, 1);
      if (t % 3 == 0) m.tail(c.a.n - 2).setZero();  // special strata
      if (t % 4 == 1) m.head(2).setZero();
      const auto a = reduce_isotropy_route(c.d, c.a, m);
      const auto b = reduce_orbit_route(c.d, c.a, m);
      CHECK(a.lagrangian);
      CHECK(b.lagrangian);
      CHECK(compare_routes(a, b, 1e-8).agree);
      CHECK(rank_row(c.d, c.a, m).iq_identity);
    }
  }
}

TEST_CASE("property: isotropy elements preserve the stratum structure") {
  // For G-invariant D, each h in G_m maps D_Q to itself.
  std::mt19937_64 rng(52);
  ActionSpec z2_circle = circle_action({2}, 1);
  z2_circle.finite = FiniteGroupRep{{Matrix::Identity(3, 3), diag({1, 1, -1})}};
  const DiracFieldSpec d(3, DiracFieldSpec::Bivector{parse_matrix({{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "0", "0"}}, 3)});
  for (int t = 0; t < 20; ++t) {
    Vector m = random_matrix(rng, 3, 1);
    if (t % 2) m(2) = 0.0;
    const IsotropyDescriptor h = isotropy(z2_circle, m);
    const auto r = restrict_to_stratum(d, z2_circle, m);
    const Matrix e = r.stratum.basis();
    for (const auto& el : h.elements) {
      const Matrix g = e.transpose() * element_matrix(z2_circle, el) * e;  // action on Fix(H)
      CHECK(distance(transform(g, r.dirac), r.dirac) < 1e-10);
    }
  }
}

TEST_CASE("quotient models") {
  const Subspace total = Subspace::full(3);
  const Subspace vertical = span({vec({0, 0, 1})}, 3);
  const QuotientModel q = QuotientModel::build(vec({1, 0, 0}), total, vertical);
  CHECK(q.dim() == 2);
  CHECK((q.projection * vec({0, 0, 1})).norm() < 1e-12);
  CHECK_THROWS_AS(QuotientModel::build(vec({1, 0, 0}), span({vec({1, 0, 0})}, 3), vertical), Error);
}
