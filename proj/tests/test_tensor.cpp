#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace klab;
using namespace klab::testing;

namespace {

RationalFunction random_coefficient(std::mt19937_64 &rng, const Chart &c) {
  std::uniform_int_distribution<int> coeff(-3, 3), pick(0, c.dim() - 1), power(0, 2);
  std::string s = "0";
  for (int i = 0; i < 3; ++i)
    s += " + (" + std::to_string(coeff(rng)) + ")*" + c[pick(rng)].name() + "^" + std::to_string(power(rng)) + "*" +
         c[pick(rng)].name();
  if (coeff(rng) > 1)
    s = "(" + s + ")/(1 + " + c[pick(rng)].name() + "^2)";
  return rf(s);
}

Multivector random_bivector(std::mt19937_64 &rng, const Chart &c) {
  Multivector P(c, 2);
  for (const auto &idx : increasing_tuples(c.dim(), 2))
    P.set(idx, random_coefficient(rng, c));
  return P;
}

DifferentialForm random_form(std::mt19937_64 &rng, const Chart &c, int k) {
  DifferentialForm w(c, k);
  for (const auto &idx : increasing_tuples(c.dim(), k))
    w.set(idx, random_coefficient(rng, c));
  return w;
}

Multivector random_field(std::mt19937_64 &rng, const Chart &c) {
  std::vector<RationalFunction> v;
  for (int i = 0; i < c.dim(); ++i)
    v.push_back(random_coefficient(rng, c));
  return vector_field(c, v);
}

// [L,L]^{abc} = 2 sum_d (L^{ad} d_d L^{bc} + L^{bd} d_d L^{ca} + L^{cd} d_d L^{ab})
RationalFunction brute_force_jacobiator(const Multivector &L, int a, int b, int c) {
  const Chart &ch = L.chart();
  RationalFunction out;
  for (int d = 0; d < ch.dim(); ++d) {
    Symbol q = ch[d];
    out = out + L.get({a, d}) * derivative(L.get({b, c}), q) + L.get({b, d}) * derivative(L.get({c, a}), q) +
          L.get({c, d}) * derivative(L.get({a, b}), q);
  }
  return RationalFunction(2) * out;
}

// (L_X w)_{ab} = X^c d_c w_{ab} + w_{cb} d_a X^c + w_{ac} d_b X^c
RationalFunction brute_force_lie_form(const Multivector &X, const DifferentialForm &w, int a, int b) {
  const Chart &ch = w.chart();
  RationalFunction out;
  for (int c = 0; c < ch.dim(); ++c) {
    RationalFunction Xc = X.get({c});
    out = out + Xc * derivative(w.get({a, b}), ch[c]) + w.get({c, b}) * derivative(Xc, ch[a]) +
          w.get({a, c}) * derivative(Xc, ch[b]);
  }
  return out;
}

} // namespace

TEST(Wedge, BasisBivector) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  Multivector P = wedge(coordinate_vector(c, coordinate("t")), coordinate_vector(c, coordinate("x")));
  EXPECT_TRUE(same(P.get({0, 1}), "1"));
  EXPECT_TRUE(same(P.get({1, 0}), "-1"));
  EXPECT_EQ(P.components().size(), 1u);
}

TEST(Wedge, GradedAntisymmetry) {
  std::mt19937_64 rng(1);
  Chart c = Chart::of("R4", {"a1", "a2", "a3", "a4"});
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 2; ++l) {
      DifferentialForm a = random_form(rng, c, k), b = random_form(rng, c, l);
      DifferentialForm sum = wedge(a, b) - wedge(b, a).scaled(RationalFunction((k * l) % 2 ? -1 : 1));
      EXPECT_TRUE(sum.is_zero()) << k << " " << l;
    }
}

TEST(Wedge, ShuffleSignOnChartOrder) {
  Chart txp = Chart::of("txp", {"t", "x", "p"});
  DifferentialForm w = wedge(coordinate_form(txp, coordinate("t")), form1(txp, {"0", "p", "0"}));
  EXPECT_TRUE(same(w.get({0, 1}), "p"));
  Chart xtp = Chart::of("xtp", {"x", "t", "p"});
  DifferentialForm v = wedge(coordinate_form(xtp, coordinate("t")), form1(xtp, {"p", "0", "0"}));
  EXPECT_TRUE(same(v.get({0, 1}), "-p"));
  EXPECT_TRUE(same(v.component({coordinate("t"), coordinate("x")}), "p"));
}

TEST(Wedge, Associativity) {
  std::mt19937_64 rng(2);
  Chart c = Chart::of("R4", {"a1", "a2", "a3", "a4"});
  DifferentialForm a = random_form(rng, c, 1), b = random_form(rng, c, 1), d = random_form(rng, c, 2);
  EXPECT_EQ(wedge(wedge(a, b), d), wedge(a, wedge(b, d)));
}

TEST(ExteriorDerivative, ContactForm) {
  Chart c = Chart::of("zxp", {"z", "x", "p"});
  DifferentialForm dw = exterior_derivative(form1(c, {"1", "-p", "0"}));
  EXPECT_EQ(dw, form2(c, {{"p", "x", "-1"}}));
}

TEST(ExteriorDerivative, SquaresToZero) {
  std::mt19937_64 rng(3);
  Chart c = Chart::of("R4", {"a1", "a2", "a3", "a4"});
  for (int k = 0; k <= 2; ++k)
    EXPECT_TRUE(exterior_derivative(exterior_derivative(random_form(rng, c, k))).is_zero());
}

TEST(ExteriorDerivative, GradedLeibniz) {
  std::mt19937_64 rng(4);
  Chart c = Chart::of("R4", {"a1", "a2", "a3", "a4"});
  DifferentialForm a = random_form(rng, c, 1), b = random_form(rng, c, 2);
  EXPECT_EQ(exterior_derivative(wedge(a, b)),
            wedge(exterior_derivative(a), b) - wedge(a, exterior_derivative(b)));
}

TEST(ExteriorDerivative, SymplectisationOfContactForm) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  DifferentialForm ta = form1(c, {"0", "t", "-t*p", "0"});
  EXPECT_EQ(exterior_derivative(ta), form2(c, {{"t", "z", "1"}, {"t", "x", "-p"}, {"p", "x", "-t"}}));
}

TEST(InteriorProduct, EulerFieldOnDtWedgeAlpha) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  Multivector E = field(c, {"t", "0", "0", "0"});
  DifferentialForm alpha = form1(c, {"0", "1", "-p", "0"});
  EXPECT_EQ(interior_product(E, wedge(coordinate_form(c, coordinate("t")), alpha)), alpha.scaled(rf("t")));
  DifferentialForm omega = form2(c, {{"t", "z", "1"}, {"t", "x", "-p"}, {"p", "x", "-t"}});
  EXPECT_EQ(interior_product(E, omega), alpha.scaled(rf("t")));
}

TEST(InteriorProduct, ZeroFormIsRejected) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  EXPECT_THROW(interior_product(field(c, {"1", "0"}), DifferentialForm::scalar(c, rf("x"))), TensorError);
}

TEST(LieDerivative, EulerOnPoissonisedBivectorAndSymplecticForm) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  Multivector E = field(c, {"t", "0", "0", "0"});
  Multivector L = bivector(c, {{"t", "z", "1"}, {"z", "p", "p/t"}, {"x", "p", "1/t"}});
  EXPECT_EQ(lie_derivative(E, L), -L);
  DifferentialForm omega = form2(c, {{"t", "z", "1"}, {"t", "x", "-p"}, {"p", "x", "-t"}});
  EXPECT_EQ(lie_derivative(E, omega), omega);
}

TEST(LieDerivative, ScalarIsDirectionalDerivative) {
  Chart c = Chart::of("xy", {"x", "y"});
  Multivector X = field(c, {"y", "x^2"});
  DifferentialForm f = DifferentialForm::scalar(c, rf("x*y^2"));
  EXPECT_TRUE(same(lie_derivative(X, f).get({}), "y^3 + 2*x^3*y"));
  EXPECT_TRUE(same(directional_derivative(X, rf("x*y^2")), "y^3 + 2*x^3*y"));
}

TEST(LieDerivative, MatchesComponentFormulaOnTwoForms) {
  std::mt19937_64 rng(5);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  for (int i = 0; i < 5; ++i) {
    Multivector X = random_field(rng, c);
    DifferentialForm w = random_form(rng, c, 2);
    DifferentialForm L = lie_derivative(X, w);
    for (const auto &idx : increasing_tuples(3, 2))
      EXPECT_EQ(L.get(idx), brute_force_lie_form(X, w, idx[0], idx[1]));
  }
}

TEST(LieDerivative, CartanFormula) {
  std::mt19937_64 rng(6);
  Chart c = Chart::of("R4", {"a1", "a2", "a3", "a4"});
  Multivector X = random_field(rng, c);
  DifferentialForm w = random_form(rng, c, 2);
  EXPECT_EQ(lie_derivative(X, w),
            interior_product(X, exterior_derivative(w)) + exterior_derivative(interior_product(X, w)));
}

TEST(Schouten, ConstantBivectorCommutesWithItself) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  Multivector P = bivector(c, {{"t", "x", "1"}});
  EXPECT_TRUE(schouten(P, P).is_zero());
}

TEST(Schouten, NonJacobiBivectorResidual) {
  Chart c = Chart::of("xyz", {"x", "y", "z"});
  Multivector pi = bivector(c, {{"x", "y", "y"}, {"y", "z", "x"}});
  Multivector r = schouten(pi, pi);
  ASSERT_EQ(r.degree(), 3);
  EXPECT_EQ(r.get({0, 1, 2}), brute_force_jacobiator(pi, 0, 1, 2));
  EXPECT_FALSE(r.get({0, 1, 2}).is_zero());
  // Magnitude 2x; the sign follows the bracket normalisation.
  RationalFunction v = r.get({0, 1, 2});
  EXPECT_TRUE(v == rf("2*x") || v == rf("-2*x"));
}

TEST(Schouten, MatchesComponentFormulaOnRandomBivectors) {
  std::mt19937_64 rng(8);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  for (int i = 0; i < 6; ++i) {
    Multivector P = random_bivector(rng, c);
    Multivector r = schouten(P, P);
    EXPECT_EQ(r.get({0, 1, 2}), brute_force_jacobiator(P, 0, 1, 2));
  }
}

TEST(Schouten, VectorFieldsGiveCommutator) {
  std::mt19937_64 rng(9);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  Multivector X = random_field(rng, c), Y = random_field(rng, c);
  Multivector b = schouten(X, Y);
  for (int i = 0; i < 3; ++i) {
    RationalFunction expected;
    for (int j = 0; j < 3; ++j)
      expected = expected + X.get({j}) * derivative(Y.get({i}), c[j]) - Y.get({j}) * derivative(X.get({i}), c[j]);
    EXPECT_EQ(b.get({i}), expected);
  }
  EXPECT_EQ(lie_derivative(X, Y), b);
}

TEST(Schouten, GradedSymmetryOnBivectors) {
  std::mt19937_64 rng(10);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  Multivector P = random_bivector(rng, c), Q = random_bivector(rng, c);
  // [P,Q] = -(-1)^{(p-1)(q-1)} [Q,P]
  EXPECT_EQ(schouten(P, Q), schouten(Q, P));
  Multivector X = random_field(rng, c);
  EXPECT_EQ(schouten(X, P), -schouten(P, X));
}

TEST(Sharp, ComponentConvention) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  Multivector L = bivector(c, {{"t", "x", "1"}});
  Multivector v = sharp(L, coordinate_form(c, coordinate("x")));
  EXPECT_EQ(v, coordinate_vector(c, coordinate("t")));
  EXPECT_TRUE(sharp(Multivector(c, 2), coordinate_form(c, coordinate("x"))).is_zero());
}

TEST(Sharp, PairingIsAntisymmetric) {
  std::mt19937_64 rng(12);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  Multivector L = random_bivector(rng, c);
  DifferentialForm a = random_form(rng, c, 1), b = random_form(rng, c, 1);
  EXPECT_TRUE((pairing(L, a, b) + pairing(L, b, a)).is_zero());
  // Lambda(alpha, beta) = <alpha, sharp(beta)>
  Multivector sb = sharp(L, b);
  RationalFunction contraction;
  for (int i = 0; i < 3; ++i)
    contraction = contraction + a.get({i}) * sb.get({i});
  EXPECT_EQ(pairing(L, a, b), contraction);
}

TEST(Pushforward, LinearScaling) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  Multivector v = pushforward(h.map(), field(c, {"1", "0"}));
  EXPECT_EQ(v, field(c, {"s", "0"}));
}

TEST(Pushforward, IdentityMap) {
  std::mt19937_64 rng(13);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  CoordMap id(c, c, {rf("a1"), rf("a2"), rf("a3")}, std::vector<RationalFunction>{rf("a1"), rf("a2"), rf("a3")});
  Multivector P = random_bivector(rng, c);
  EXPECT_EQ(pushforward(id, P), P);
}

TEST(Pushforward, PreservesBrackets) {
  std::mt19937_64 rng(14);
  Chart src = Chart::of("xy", {"x", "y"});
  Chart dst = Chart::of("uv", {"u", "v"});
  CoordMap phi(src, dst, {rf("x"), rf("y + x^2")}, std::vector<RationalFunction>{rf("u"), rf("v - u^2")});
  Multivector X = random_field(rng, src), Y = random_field(rng, src);
  EXPECT_EQ(pushforward(phi, schouten(X, Y)), schouten(pushforward(phi, X), pushforward(phi, Y)));
}

TEST(Pullback, ScalingOfFiberCoordinate) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  EXPECT_EQ(pullback(h.map(), coordinate_form(c, coordinate("t"))), coordinate_form(c, coordinate("t")).scaled(rf("s")));
  DifferentialForm omega = form2(c, {{"t", "z", "1"}, {"t", "x", "-p"}, {"p", "x", "-t"}});
  EXPECT_EQ(pullback(h.map(), omega), omega.scaled(rf("s")));
}

TEST(Pullback, CommutesWithExteriorDerivative) {
  std::mt19937_64 rng(15);
  Chart src = Chart::of("xy3", {"x", "y", "w"});
  Chart dst = Chart::of("uvw", {"u", "v", "r"});
  CoordMap phi(src, dst, {rf("x*y"), rf("y + w^2"), rf("x - w")});
  for (int k = 0; k <= 1; ++k) {
    DifferentialForm a = random_form(rng, dst, k);
    EXPECT_EQ(pullback(phi, exterior_derivative(a)), exterior_derivative(pullback(phi, a)));
  }
  DifferentialForm a = random_form(rng, dst, 1), b = random_form(rng, dst, 1);
  EXPECT_EQ(pullback(phi, wedge(a, b)), wedge(pullback(phi, a), pullback(phi, b)));
}

TEST(Pullback, IdentityMap) {
  std::mt19937_64 rng(16);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  CoordMap id(c, c, {rf("a1"), rf("a2"), rf("a3")});
  DifferentialForm w = random_form(rng, c, 2);
  EXPECT_EQ(pullback(id, w), w);
}

TEST(CoordMap, InverseIsVerified) {
  Chart src = Chart::of("xy", {"x", "y"});
  Chart dst = Chart::of("uv", {"u", "v"});
  EXPECT_THROW(CoordMap(src, dst, {rf("x"), rf("y + x^2")}, std::vector<RationalFunction>{rf("u"), rf("v + u^2")}),
               TensorError);
}

TEST(Homogeneity, PoissonisedBivectorHasDegreeMinusOne) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  Multivector L = bivector(c, {{"t", "z", "1"}, {"z", "p", "p/t"}, {"x", "p", "1/t"}});
  HomogeneityReport r = homogeneity_degree(L, h);
  EXPECT_TRUE(r.homogeneous_of(-1)) << r.describe();
  EXPECT_TRUE(r.finite.proved());
  EXPECT_TRUE(r.infinitesimal.proved());
}

TEST(Homogeneity, LinearFunctionHasDegreeOne) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  EXPECT_TRUE(homogeneity_degree(rf("t*x^2"), h).homogeneous_of(1));
}

TEST(Homogeneity, MixedDegreesAreRejected) {
  Chart c = Chart::of("txy", {"t", "x", "y"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  Multivector P = bivector(c, {{"x", "t", "1"}, {"x", "y", "1"}});
  HomogeneityReport r = homogeneity_degree(P, h);
  EXPECT_EQ(r.status, HomogeneityReport::Status::not_homogeneous);
  EXPECT_FALSE(r.residual.empty());
}

TEST(Homogeneity, FiberPowers) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  EXPECT_TRUE(homogeneity_degree(bivector(c, {{"t", "x", "1/t"}}), h).homogeneous_of(-2));
  EXPECT_TRUE(homogeneity_degree(bivector(c, {{"t", "x", "1/t^2"}}), h).homogeneous_of(-3));
  EXPECT_EQ(homogeneity_degree(Multivector(c, 2), h).status, HomogeneityReport::Status::every_degree);
}

TEST(Homogeneity, FiniteAndInfinitesimalAgreeOnMonomials) {
  Chart c = Chart::of("txy", {"t", "x", "y"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  for (int k = -3; k <= 3; ++k) {
    DifferentialForm w = form2(c, {{"x", "y", "t^" + std::to_string(k) + "*(x + y^2)"}});
    HomogeneityReport r = homogeneity_degree(w, h);
    EXPECT_TRUE(r.homogeneous_of(k));
    EXPECT_TRUE(r.finite.passed() && r.infinitesimal.passed());
  }
}

TEST(RxActionTest, GroupLawAndEuler) {
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  RxAction h = RxAction::fiber_scaling(c, parameter("s"));
  EXPECT_TRUE(h.well_formed());
  EXPECT_EQ(h.euler(), field(c, {"t", "0"}));
  RxAction bad(c, parameter("s"), {rf("t + s - 1"), rf("x*s")});
  EXPECT_TRUE(bad.identity_certificate().passed());
  EXPECT_FALSE(bad.group_law_certificate().passed());
}

TEST(Nondegeneracy, SymplectisedContactForm) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  DifferentialForm omega = form2(c, {{"t", "z", "1"}, {"t", "x", "-p"}, {"p", "x", "-t"}});
  NondegeneracyReport r = nondegenerate(omega);
  EXPECT_TRUE(r.nondegenerate());
  EXPECT_TRUE(r.nowhere_zero);
  EXPECT_TRUE(same(r.determinant, "t^2"));
}

TEST(Nondegeneracy, DegenerateForms) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  EXPECT_FALSE(nondegenerate(DifferentialForm(c, 2)).nondegenerate());
  NondegeneracyReport r = nondegenerate(form2(c, {{"t", "z", "1"}}));
  EXPECT_FALSE(r.nondegenerate());
  EXPECT_TRUE(r.determinant.is_zero());
  Chart odd = Chart::of("R3", {"a1", "a2", "a3"});
  EXPECT_FALSE(nondegenerate(form2(odd, {{"a1", "a2", "1"}})).nondegenerate());
}

TEST(Matrices, DeterminantAndInverse) {
  std::mt19937_64 rng(17);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  for (int i = 0; i < 4; ++i) {
    Matrix m(3, std::vector<RationalFunction>(3));
    for (auto &row : m)
      for (auto &e : row)
        e = random_coefficient(rng, c);
    auto inv = invert(m);
    if (determinant(m).is_zero()) {
      EXPECT_FALSE(inv.has_value());
      continue;
    }
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(determinant(m) * determinant(*inv), RationalFunction(1));
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) {
        RationalFunction e;
        for (int j = 0; j < 3; ++j)
          e = e + m[r][j] * (*inv)[j][k];
        EXPECT_EQ(e, RationalFunction(r == k ? 1 : 0));
      }
  }
}
