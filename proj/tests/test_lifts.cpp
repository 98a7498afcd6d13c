#include "support.hpp"

#include "klab/lifts.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace klab;
using namespace klab::testing;

namespace {

Chart tx() { return Chart::of("tx", {"t", "x"}, "t"); }

RxAction standard(const Chart &c) { return RxAction::fiber_scaling(c, parameter("s")); }

RationalFunction image_of(const RxAction &h, std::string_view coord) {
  int i = h.chart().index_of(coord);
  EXPECT_GE(i, 0) << coord;
  return h.images().at(static_cast<std::size_t>(i));
}

Multivector random_bivector(std::mt19937_64 &rng, const Chart &c) {
  std::uniform_int_distribution<int> coeff(-3, 3), pick(0, c.dim() - 1), power(0, 2);
  Multivector P(c, 2);
  for (const auto &idx : increasing_tuples(c.dim(), 2)) {
    std::string s = std::to_string(coeff(rng));
    for (int i = 0; i < 2; ++i)
      s += " + (" + std::to_string(coeff(rng)) + ")*" + c[pick(rng)].name() + "^" + std::to_string(power(rng));
    if (coeff(rng) > 0)
      s = "(" + s + ")/(2 + " + c[pick(rng)].name() + "^2)";
    P.set(idx, rf(s));
  }
  return P;
}

} // namespace

TEST(TangentAction, StandardActionDisplay) {
  RxAction T = tangent_action(standard(tx()));
  EXPECT_TRUE(T.well_formed());
  EXPECT_TRUE(same(image_of(T, "t"), "s*t"));
  EXPECT_TRUE(same(image_of(T, "x"), "x"));
  EXPECT_TRUE(same(image_of(T, "d_t"), "s*d_t"));
  EXPECT_TRUE(same(image_of(T, "d_x"), "d_x"));
  EXPECT_EQ(T.euler(), field(T.chart(), {"t", "0", "d_t", "0"}));
}

TEST(TangentAction, IdentityAction) {
  Chart c = tx();
  RxAction id(c, parameter("s"), {rf("t"), rf("x")});
  RxAction T = tangent_action(id);
  for (int i = 0; i < T.chart().dim(); ++i)
    EXPECT_EQ(T.images()[static_cast<std::size_t>(i)], Expression(T.chart()[i]).normal_form());
}

TEST(TangentAction, ShiftedWeight) {
  RxAction T = tangent_action(standard(tx()), 2);
  EXPECT_TRUE(T.well_formed());
  EXPECT_TRUE(same(image_of(T, "d_t"), "s^3*d_t"));
  EXPECT_TRUE(same(image_of(T, "d_x"), "s^2*d_x"));
}

TEST(TangentAction, NonlinearAction) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  Symbol s = parameter("s");
  RxAction h(c, s, {rf("s*t"), rf("s^2*x")});
  RxAction T = tangent_action(h);
  EXPECT_TRUE(T.well_formed());
  EXPECT_TRUE(same(image_of(T, "d_x"), "s^2*d_x"));
}

TEST(PhaseAction, StandardActionDisplay) {
  RxAction P = phase_action(standard(tx()));
  EXPECT_TRUE(P.well_formed());
  EXPECT_TRUE(same(image_of(P, "t"), "s*t"));
  EXPECT_TRUE(same(image_of(P, "x"), "x"));
  EXPECT_TRUE(same(image_of(P, "p_t"), "p_t"));
  EXPECT_TRUE(same(image_of(P, "p_x"), "s*p_x"));
}

TEST(PhaseAction, IdentityAction) {
  Chart c = tx();
  RxAction P = phase_action(RxAction(c, parameter("s"), {rf("t"), rf("x")}));
  EXPECT_TRUE(same(image_of(P, "p_t"), "s*p_t"));
  EXPECT_TRUE(same(image_of(P, "p_x"), "s*p_x"));
  RxAction P0 = phase_action(RxAction(c, parameter("s"), {rf("t"), rf("x")}), -1);
  for (int i = 0; i < P0.chart().dim(); ++i)
    EXPECT_EQ(P0.images()[static_cast<std::size_t>(i)], Expression(P0.chart()[i]).normal_form());
}

TEST(PhaseAction, PreservesCanonicalFormUpToScale) {
  Chart c = tx();
  RxAction P = phase_action(standard(c));
  DifferentialForm w = canonical_symplectic_form(c);
  EXPECT_TRUE(homogeneity_degree(w, P).homogeneous_of(1));
}

TEST(TangentLift, ConstantBivector) {
  Chart c = tx();
  Multivector L = bivector(c, {{"t", "x", "1"}});
  Multivector T = tangent_lift(L);
  EXPECT_EQ(T, bivector(T.chart(), {{"t", "d_x", "1"}, {"d_t", "x", "1"}}));
  EXPECT_TRUE(tangent_lift(Multivector(c, 2)).is_zero());
}

TEST(TangentLift, VectorFieldLiftIsCompleteLift) {
  Chart c = Chart::of("xy", {"x", "y"});
  Multivector X = field(c, {"x*y", "y^2"});
  Multivector T = tangent_lift(X);
  EXPECT_EQ(T, field(T.chart(), {"x*y", "y^2", "y*d_x + x*d_y", "2*y*d_y"}));
}

TEST(TangentLift, CommutesWithSchouten) {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 3; ++n) {
    std::vector<std::string> names{"a1", "a2", "a3"};
    names.resize(static_cast<std::size_t>(n));
    Chart c = Chart::of("coh" + std::to_string(n), names);
    for (int i = 0; i < 5; ++i) {
      Multivector L = random_bivector(rng, c);
      Multivector dL = tangent_lift(L);
      EXPECT_EQ(schouten(dL, dL), tangent_lift(schouten(L, L)));
    }
  }
}

TEST(Intertwine, DegreeMinusOneBivectors) {
  Chart c = tx();
  EXPECT_TRUE(intertwine_check(bivector(c, {{"t", "x", "1"}}), standard(c)).intertwines());
  Chart c3 = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  Multivector contact = bivector(c3, {{"t", "z", "1"}, {"z", "p", "p/t"}, {"x", "p", "1/t"}});
  IntertwineReport r = intertwine_check(contact, standard(c3));
  EXPECT_TRUE(r.intertwines());
  EXPECT_TRUE(r.equality.proved());
  EXPECT_TRUE(r.homogeneity.homogeneous_of(-1));
  Chart c2 = Chart::of("txy", {"t", "x", "y"}, "t");
  EXPECT_TRUE(intertwine_check(bivector(c2, {{"x", "y", "x*y/t"}, {"t", "x", "x"}}), standard(c2)).intertwines());
}

TEST(Intertwine, OtherDegreesFail) {
  Chart c = tx();
  IntertwineReport r = intertwine_check(bivector(c, {{"t", "x", "1/t^2"}}), standard(c));
  EXPECT_FALSE(r.intertwines());
  EXPECT_TRUE(r.homogeneity.homogeneous_of(-3));
  // Hand expansion: s p_x / t^2 against p_x / (s t^2), and -p_t / t^2 against -p_t / (s t)^2.
  EXPECT_TRUE(same(r.residual[0], "p_x*(s - 1/s)/t^2"));
  EXPECT_TRUE(same(r.residual[1], "-p_t*(1 - 1/s^2)/t^2"));

  IntertwineReport r2 = intertwine_check(bivector(c, {{"t", "x", "1/t"}}), standard(c));
  EXPECT_FALSE(r2.intertwines());
  EXPECT_TRUE(r2.homogeneity.homogeneous_of(-2));
  EXPECT_FALSE(intertwine_check(bivector(c, {{"t", "x", "t"}}), standard(c)).intertwines());
}

TEST(Intertwine, ZeroBivector) {
  Chart c = tx();
  IntertwineReport r = intertwine_check(Multivector(c, 2), standard(c));
  EXPECT_TRUE(r.intertwines());
  EXPECT_EQ(r.homogeneity.status, HomogeneityReport::Status::every_degree);
}

TEST(Intertwine, AgreesWithDegreeOnRandomHomogeneousBivectors) {
  Chart c = Chart::of("txy", {"t", "x", "y"}, "t");
  for (int k = -3; k <= 1; ++k) {
    std::string w = "t^" + std::to_string(k + 1);
    std::string v = "t^" + std::to_string(k);
    Multivector L = bivector(c, {{"t", "x", w + "*(x + y^2)"}, {"x", "y", v + "*x*y"}});
    IntertwineReport r = intertwine_check(L, standard(c));
    EXPECT_TRUE(r.homogeneity.homogeneous_of(k)) << r.homogeneity.describe();
    EXPECT_EQ(r.intertwines(), k == -1) << k;
  }
}

TEST(LinearIdentification, InvariantCoordinates) {
  Chart c = tx();
  LinearIdentification T = linear_rx_identification(LinearBundle::tangent, standard(c));
  EXPECT_TRUE(T.passed());
  EXPECT_TRUE(same(T.map.images()[static_cast<std::size_t>(T.invariant_chart().index_of("d_t__inv"))], "d_t/t"));
  EXPECT_TRUE(same(T.map.images()[static_cast<std::size_t>(T.invariant_chart().index_of("d_x"))], "d_x"));
  LinearIdentification P = linear_rx_identification(LinearBundle::cotangent, standard(c));
  EXPECT_TRUE(P.passed());
  EXPECT_TRUE(same(P.map.images()[static_cast<std::size_t>(P.invariant_chart().index_of("p_x__inv"))], "p_x/t"));
  EXPECT_TRUE(same(P.map.images()[static_cast<std::size_t>(P.invariant_chart().index_of("p_t"))], "p_t"));
  for (const auto &[name, rep] : P.invariance)
    EXPECT_TRUE(rep.homogeneous_of(0)) << name;
}

TEST(ReduceTrivial, DegreeMinusOne) {
  Chart c = tx();
  ReducedMorphism m = reduce_trivial(bivector(c, {{"t", "x", "1"}}));
  EXPECT_TRUE(m.reduced());
  ASSERT_EQ(m.matrix.size(), 2u);
  // d_t/t = p_x/t ; d_x = -p_t
  EXPECT_TRUE(same(m.matrix[0][1], "1"));
  EXPECT_TRUE(same(m.matrix[1][0], "-1"));
  EXPECT_TRUE(m.matrix[0][0].is_zero());
  EXPECT_TRUE(m.matrix[1][1].is_zero());
}

TEST(ReduceTrivial, ZeroAndWrongDegree) {
  Chart c = tx();
  ReducedMorphism z = reduce_trivial(Multivector(c, 2));
  EXPECT_TRUE(z.reduced());
  for (const auto &row : z.matrix)
    for (const auto &e : row)
      EXPECT_TRUE(e.is_zero());
  ReducedMorphism bad = reduce_trivial(bivector(c, {{"t", "x", "1/t"}}));
  EXPECT_FALSE(bad.reduced());
  EXPECT_FALSE(bad.residual.empty());
}

TEST(ReduceTrivial, MatchesSharpInInvariantCoordinates) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  Multivector L = bivector(c, {{"t", "z", "1"}, {"z", "p", "p/t"}, {"x", "p", "1/t"}});
  ReducedMorphism m = reduce_trivial(L);
  ASSERT_TRUE(m.reduced());
  // Row d_z: L^{zt} p_t + t L^{zp} p_p / t = -p_t + p * P_p
  int z = 1, p = 3;
  EXPECT_TRUE(same(m.matrix[z][0], "-1"));
  EXPECT_TRUE(same(m.matrix[z][p], "p"));
  EXPECT_TRUE(same(m.matrix[0][1], "1"));
}

TEST(TangentAlgebroidTest, CertifiedStructuresPass) {
  std::vector<KirillovStructure> ks;
  Chart l = Chart::of("line", {"x"});
  ks.push_back(poissonise(JacobiPair(Multivector(l, 2), field(l, {"1"}))));
  Chart b = Chart::of("zxp", {"z", "x", "p"});
  ks.push_back(poissonise(JacobiPair(bivector(b, {{"x", "p", "1"}, {"z", "p", "p"}}), field(b, {"1", "0", "0"}))));
  Chart q = Chart::of("R2", {"x", "y"});
  ks.push_back(poissonise(JacobiPair(bivector(q, {{"x", "y", "x*y"}}), field(q, {"x", "0"}))));
  ks.push_back(poissonise(JacobiPair::zero(q)));
  for (const auto &k : ks) {
    ASSERT_TRUE(k.certified());
    TangentAlgebroid A = tangent_algebroid(k);
    EXPECT_TRUE(A.report.passed()) << A.report.failed_block;
  }
}
