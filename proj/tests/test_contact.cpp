#include "support.hpp"

#include "klab/contact.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace klab;
using namespace klab::testing;

namespace {

Chart zxp() { return Chart::of("zxp", {"z", "x", "p"}); }

DifferentialForm darboux() { return form1(zxp(), {"1", "-p", "0"}); }

RationalFunction comp(const DifferentialForm &w, std::string_view a, std::string_view b) {
  return w.component({coordinate(a), coordinate(b)});
}

// Random polynomial one-form; some coefficients vanish so that degenerate
// candidates occur in the corpus.
DifferentialForm random_one_form(std::mt19937_64 &rng, const Chart &c) {
  std::uniform_int_distribution<int> coeff(-2, 2), pick(0, c.dim() - 1), power(0, 1), shape(0, 3);
  std::vector<RationalFunction> comps;
  for (int i = 0; i < c.dim(); ++i) {
    if (shape(rng) == 0) {
      comps.emplace_back();
      continue;
    }
    std::string s = std::to_string(coeff(rng));
    for (int k = 0; k < 2; ++k)
      s += " + (" + std::to_string(coeff(rng)) + ")*" + c[pick(rng)].name() + "^" + std::to_string(power(rng));
    comps.push_back(rf(s));
  }
  return one_form(c, comps);
}

} // namespace

TEST(Symplectise, DarbouxForm) {
  HomogeneousSymplectic H = symplectise(darboux());
  EXPECT_TRUE(H.certified());
  EXPECT_TRUE(H.closed.proved());
  EXPECT_TRUE(H.homogeneity.homogeneous_of(1));
  EXPECT_TRUE(same(comp(H.omega, "t", "z"), "1"));
  EXPECT_TRUE(same(comp(H.omega, "t", "x"), "-p"));
  EXPECT_TRUE(same(comp(H.omega, "p", "x"), "-t"));
  EXPECT_EQ(H.omega.components().size(), 3u);
  EXPECT_TRUE(same(H.nondegeneracy.determinant, "t^2"));
  EXPECT_TRUE(H.nondegeneracy.nowhere_zero);
}

TEST(Symplectise, NotContactInDimensionThree) {
  HomogeneousSymplectic H = symplectise(form1(zxp(), {"1", "0", "0"}));
  EXPECT_TRUE(H.closed.passed());
  EXPECT_TRUE(H.homogeneity.homogeneous_of(1));
  EXPECT_FALSE(H.nondegeneracy.nondegenerate());
  EXPECT_FALSE(H.certified());
}

TEST(Symplectise, DimensionOne) {
  HomogeneousSymplectic H = symplectise(form1(Chart::of("z", {"z"}), {"1"}));
  EXPECT_TRUE(H.certified());
  EXPECT_TRUE(same(H.nondegeneracy.determinant, "1"));
}

TEST(Symplectise, EulerContraction) {
  std::mt19937_64 rng(2);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  for (int i = 0; i < 5; ++i) {
    DifferentialForm alpha = random_one_form(rng, c);
    HomogeneousSymplectic H = symplectise(alpha);
    DifferentialForm contraction = interior_product(H.euler(), H.omega);
    for (int j = 0; j < c.dim(); ++j)
      EXPECT_EQ(contraction.component({c[j]}), rf("t") * alpha.get({j}));
    EXPECT_TRUE(contraction.component({coordinate("t")}).is_zero());
    EXPECT_EQ(lie_derivative(H.euler(), H.omega), H.omega);
  }
}

TEST(IsContact, Examples) {
  ContactReport d = is_contact_form(darboux());
  EXPECT_TRUE(d.contact());
  EXPECT_TRUE(d.agree());
  EXPECT_EQ(d.n, 1);
  EXPECT_TRUE(d.volume_coefficient == RationalFunction(1) || d.volume_coefficient == RationalFunction(-1));

  ContactReport z = is_contact_form(form1(zxp(), {"1", "0", "0"}));
  EXPECT_FALSE(z.contact());
  EXPECT_FALSE(z.volume.passed());
  EXPECT_FALSE(z.symplectic.nondegenerate());
  EXPECT_TRUE(z.agree());

  ContactReport one = is_contact_form(form1(Chart::of("z", {"z"}), {"1"}));
  EXPECT_TRUE(one.contact());
  EXPECT_EQ(one.n, 0);
}

TEST(IsContact, ZeroFormAndEvenDimension) {
  ContactReport zero = is_contact_form(DifferentialForm(zxp(), 1));
  EXPECT_FALSE(zero.nonvanishing.passed());
  EXPECT_FALSE(zero.contact());
  EXPECT_THROW(is_contact_form(form1(Chart::of("R2", {"x", "y"}), {"1", "x"})), ContactError);
}

TEST(IsContact, StandardFormInDimensionFive) {
  Chart c = Chart::of("R5", {"z", "x1", "x2", "p1", "p2"});
  ContactReport r = is_contact_form(form1(c, {"1", "-p1", "-p2", "0", "0"}));
  EXPECT_TRUE(r.contact());
  EXPECT_EQ(r.n, 2);
  ContactReport half = is_contact_form(form1(c, {"1", "-p1", "0", "0", "0"}));
  EXPECT_FALSE(half.contact());
  EXPECT_TRUE(half.agree());
}

TEST(IsContact, CriteriaAgreeOnRandomCorpus) {
  std::mt19937_64 rng(20);
  Chart c3 = Chart::of("R3", {"a1", "a2", "a3"});
  Chart c5 = Chart::of("R5", {"b1", "b2", "b3", "b4", "b5"});
  int contact = 0, total = 0;
  for (int i = 0; i < 24; ++i) {
    const Chart &c = i % 2 ? c5 : c3;
    DifferentialForm alpha = random_one_form(rng, c);
    ContactReport r = is_contact_form(alpha);
    EXPECT_TRUE(r.agree()) << alpha.to_string();
    contact += r.contact();
    ++total;
  }
  EXPECT_GE(total, 20);
  // The corpus exercises both verdicts.
  EXPECT_GT(contact, 0);
  EXPECT_LT(contact, total);
}

TEST(Recover, RoundTrip) {
  HomogeneousSymplectic H = symplectise(darboux());
  RecoveryReport r = recover_alpha(H);
  ASSERT_TRUE(r.recovered());
  DifferentialForm back = r.alpha->on_chart(darboux().chart());
  EXPECT_EQ(back, darboux());
  EXPECT_EQ(is_zero(back.get({1}) - darboux().get({1})).status, ZeroStatus::proved_zero);
  EXPECT_TRUE(r.basic.proved());
}

TEST(Recover, DtWedgeDz) {
  Chart c = Chart::of("tz", {"t", "z"}, "t");
  HomogeneousSymplectic H = homogeneous_symplectic(form2(c, {{"t", "z", "1"}}), RxAction::fiber_scaling(c, parameter("s")));
  RecoveryReport r = recover_alpha(H);
  ASSERT_TRUE(r.recovered());
  EXPECT_TRUE(same(r.alpha->component({coordinate("z")}), "1"));
}

TEST(Recover, WrongDegreeFailsBeforeRecovery) {
  Chart c = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  HomogeneousSymplectic H = homogeneous_symplectic(form2(c, {{"p", "x", "1"}, {"t", "z", "1"}}),
                                                   RxAction::fiber_scaling(c, parameter("s")));
  EXPECT_FALSE(H.homogeneity.homogeneous_of(1));
  RecoveryReport r = recover_alpha(H);
  EXPECT_FALSE(r.preconditions.passed());
  EXPECT_FALSE(r.recovered());
}

TEST(Recover, RandomContactFormsRoundTrip) {
  std::mt19937_64 rng(31);
  Chart c = Chart::of("R3", {"a1", "a2", "a3"});
  int checked = 0;
  for (int i = 0; i < 20 && checked < 5; ++i) {
    DifferentialForm alpha = random_one_form(rng, c);
    if (!is_contact_form(alpha).contact())
      continue;
    RecoveryReport r = recover_alpha(symplectise(alpha));
    ASSERT_TRUE(r.recovered());
    EXPECT_EQ(r.alpha->on_chart(c), alpha);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Embedding, DarbouxForm) {
  HomogeneousSymplectic H = symplectise(darboux());
  EmbeddingReport e = psi_embedding(H);
  ASSERT_TRUE(e.embedded());
  EXPECT_TRUE(e.pullback.proved());
  const CoordMap &psi = *e.psi;
  auto image = [&](std::string_view name) {
    return psi.images()[static_cast<std::size_t>(psi.target().index_of(name))];
  };
  EXPECT_TRUE(same(image("z"), "z"));
  EXPECT_TRUE(same(image("x"), "x"));
  EXPECT_TRUE(same(image("p"), "p"));
  EXPECT_TRUE(same(image("p_z"), "t"));
  EXPECT_TRUE(same(image("p_x"), "-t*p"));
  EXPECT_TRUE(image("p_p").is_zero());
  // Independent check: pull the canonical form back by hand.
  DifferentialForm canonical = canonical_symplectic_form(zxp());
  EXPECT_EQ(pullback(psi, canonical), H.omega);
}

TEST(Embedding, DimensionOne) {
  HomogeneousSymplectic H = symplectise(form1(Chart::of("z", {"z"}), {"1"}));
  EmbeddingReport e = psi_embedding(H);
  ASSERT_TRUE(e.embedded());
  EXPECT_TRUE(same(e.psi->images()[static_cast<std::size_t>(e.psi->target().index_of("p_z"))], "t"));
}

TEST(Embedding, ShiftedActionIsCaught) {
  HomogeneousSymplectic base = symplectise(darboux());
  Chart c = base.total;
  std::vector<RationalFunction> images;
  for (Symbol q : c.coords())
    images.push_back(q == coordinate("t") ? rf("s^2*t") : Expression(q).normal_form());
  HomogeneousSymplectic H = homogeneous_symplectic(base.omega, RxAction(c, parameter("s"), images));
  EmbeddingReport e = psi_embedding(H);
  EXPECT_FALSE(e.preconditions.passed());
  EXPECT_FALSE(e.embedded());
}

TEST(Flat, InverseBivectorInvertsFlat) {
  HomogeneousSymplectic H = symplectise(darboux());
  Multivector L = inverse_bivector(H.omega);
  const Chart &c = H.total;
  for (int i = 0; i < c.dim(); ++i) {
    Multivector e = coordinate_vector(c, c[i]);
    EXPECT_EQ(sharp(L, flat(H.omega, e)), e) << c[i].name();
  }
  EXPECT_THROW(inverse_bivector(form2(c, {{"t", "z", "1"}})), ContactError);
}
