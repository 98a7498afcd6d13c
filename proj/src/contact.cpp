#include "klab/contact.hpp"

namespace klab {

namespace {

RationalFunction sym(Symbol s) { return Expression(s).normal_form(); }

Certificate require_certified(const HomogeneousSymplectic &H) {
  Certificate c = H.certificate();
  c.name = "homogeneous symplectic preconditions";
  return c;
}

} // namespace

Chart HomogeneousSymplectic::base() const {
  std::vector<Symbol> coords;
  for (Symbol q : total.coords())
    if (q != fiber())
      coords.push_back(q);
  std::string name = total.name();
  if (name.size() > 2 && name.compare(name.size() - 2, 2, "^x") == 0)
    name.resize(name.size() - 2);
  return Chart(name, std::move(coords));
}

Certificate HomogeneousSymplectic::certificate() const {
  Certificate degree = homogeneity.homogeneous_of(1)
                           ? Certificate{"degree +1", homogeneity.finite.verdict, homogeneity.finite.detail, {}}
                           : fail("degree +1", homogeneity.describe());
  Certificate nd = nondegeneracy.nondegenerate() ? nondegeneracy.nonvanishing : fail("det != 0", nondegeneracy.reason);
  return combine("homogeneous symplectic", {closed, nd, degree});
}

HomogeneousSymplectic homogeneous_symplectic(DifferentialForm omega, RxAction action, const ZeroOptions &options) {
  if (omega.degree() != 2)
    throw ContactError("symplectic form must have degree 2");
  if (!omega.chart().fiber())
    throw ContactError("chart '" + omega.chart().name() + "' has no fiber coordinate");
  if (!omega.chart().same_coordinates(action.chart()))
    throw ContactError("form and action live on different charts");
  HomogeneousSymplectic H;
  H.total = omega.chart();
  H.omega = std::move(omega);
  H.action = std::move(action);
  DifferentialForm dw = exterior_derivative(H.omega);
  std::vector<std::pair<std::string, RationalFunction>> res;
  for (const auto &[I, c] : dw.components())
    res.emplace_back(dw.label(I), c);
  H.closed = certify_all_zero("d omega = 0", res, options);
  H.nondegeneracy = nondegenerate(H.omega, options);
  H.homogeneity = homogeneity_degree(H.omega, H.action, options);
  return H;
}

HomogeneousSymplectic symplectise(const DifferentialForm &alpha, std::string_view fiber, std::string_view parameter,
                                  const ZeroOptions &options) {
  if (alpha.degree() != 1)
    throw ContactError("contact candidate must be a one-form");
  const Chart &base = alpha.chart();
  Symbol t = coordinate(fiber);
  if (base.contains(t))
    throw ContactError("fiber coordinate '" + t.name() + "' already belongs to the base chart");
  std::vector<Symbol> coords{t};
  coords.insert(coords.end(), base.coords().begin(), base.coords().end());
  Chart total(base.name() + "^x", coords, t);
  DifferentialForm a(total, 1);
  for (const auto &[I, c] : alpha.components())
    a.set({I[0] + 1}, c);
  DifferentialForm w = wedge(coordinate_form(total, t), a) + exterior_derivative(a).scaled(sym(t));
  RxAction h = RxAction::fiber_scaling(total, klab::parameter(parameter));
  return homogeneous_symplectic(std::move(w), std::move(h), options);
}

ContactReport is_contact_form(const DifferentialForm &alpha, const ZeroOptions &options) {
  if (alpha.degree() != 1)
    throw ContactError("contact candidate must be a one-form");
  int dim = alpha.chart().dim();
  if (dim % 2 == 0)
    throw ContactError("contact forms live in odd dimension, chart '" + alpha.chart().name() + "' has dimension " +
                       std::to_string(dim));
  ContactReport rep;
  rep.n = (dim - 1) / 2;
  rep.nonvanishing = fail("alpha != 0", "every coefficient vanishes");
  for (const auto &[I, c] : alpha.components()) {
    Certificate nz = certify_nonzero("alpha != 0", c, options);
    if (nz.passed()) {
      rep.nonvanishing = nz;
      break;
    }
  }
  rep.symplectic = nondegenerate(symplectise(alpha, "t", "s", options).omega, options);
  DifferentialForm top = alpha;
  DifferentialForm da = exterior_derivative(alpha);
  for (int i = 0; i < rep.n; ++i)
    top = wedge(top, da);
  Index all;
  for (int i = 0; i < dim; ++i)
    all.push_back(i);
  rep.volume_coefficient = top.get(all);
  rep.volume = certify_nonzero("alpha ^ (d alpha)^" + std::to_string(rep.n) + " != 0", rep.volume_coefficient, options);
  return rep;
}

RecoveryReport recover_alpha(const HomogeneousSymplectic &H, const ZeroOptions &options) {
  RecoveryReport rep;
  rep.preconditions = require_certified(H);
  rep.contraction = interior_product(H.euler(), H.omega);
  if (!rep.preconditions.passed()) {
    rep.basic = fail("i_E omega = t alpha", "preconditions failed");
    return rep;
  }
  Symbol t = H.fiber();
  int ti = H.total.index_of(t);
  Chart base = H.base();
  DifferentialForm alpha(base, 1);
  std::vector<std::pair<std::string, RationalFunction>> res;
  res.emplace_back("dt-component", rep.contraction.get({ti}));
  for (int i = 0; i < H.total.dim(); ++i) {
    if (i == ti)
      continue;
    RationalFunction a = rep.contraction.get({i}) / sym(t);
    res.emplace_back(H.total[i].name() + "-coefficient d/dt", derivative(a, t));
    alpha.set({base.index_of(H.total[i])}, a);
  }
  rep.basic = certify_all_zero("i_E omega = t alpha with alpha basic", res, options);
  if (rep.basic.passed())
    rep.alpha = std::move(alpha);
  return rep;
}

EmbeddingReport psi_embedding(const HomogeneousSymplectic &H, const ZeroOptions &options) {
  EmbeddingReport rep;
  rep.preconditions = require_certified(H);
  rep.eta = flat(H.omega, H.euler());
  Symbol t = H.fiber();
  int ti = H.total.index_of(t);
  rep.basic = certify_zero("eta has no dt-component", rep.eta.get({ti}), options);
  Chart base = H.base();
  std::vector<RationalFunction> images;
  for (Symbol q : base.coords())
    images.push_back(sym(q));
  for (Symbol q : base.coords())
    images.push_back(rep.eta.get({H.total.index_of(q)}));
  CoordMap psi(H.total, cotangent_chart(base), std::move(images));
  DifferentialForm pulled = pullback(psi, canonical_symplectic_form(base));
  DifferentialForm diff = pulled - H.omega;
  std::vector<std::pair<std::string, RationalFunction>> res;
  for (const auto &[I, c] : diff.components())
    res.emplace_back(diff.label(I), c);
  rep.pullback = certify_all_zero("psi^* (dp ^ dx) = omega", res, options);
  rep.psi = std::move(psi);
  return rep;
}

DifferentialForm flat(const DifferentialForm &omega, const Multivector &X) { return interior_product(X, omega); }

Multivector inverse_bivector(const DifferentialForm &omega) {
  if (omega.degree() != 2)
    throw ContactError("inverse bivector needs a 2-form");
  auto inv = invert(component_matrix(omega));
  if (!inv)
    throw ContactError("2-form is degenerate");
  Multivector out(omega.chart(), 2);
  int n = omega.chart().dim();
  // L^# o omega^flat = id means L omega^T = 1, i.e. L = -omega^{-1}.
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      out.set({a, b}, -(*inv)[a][b]);
  return out;
}

} // namespace klab
