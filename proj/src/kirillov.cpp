#include "klab/kirillov.hpp"

#include <algorithm>

namespace klab {

namespace {

RationalFunction sym(Symbol s) { return Expression(s).normal_form(); }

void require_base_function(const Chart &base, const RationalFunction &f, const char *what) {
  for (Symbol s : free_symbols(f))
    if (s.kind() == SymbolKind::coordinate && !base.contains(s))
      throw KirillovError(std::string(what) + " depends on '" + s.name() + "', which is not a coordinate of chart '" +
                          base.name() + "'");
}

} // namespace

JacobiPair::JacobiPair(Multivector bivector, Multivector field) : bivector_(std::move(bivector)), field_(std::move(field)) {
  if (bivector_.degree() != 2)
    throw KirillovError("Jacobi pair needs a bivector");
  if (field_.degree() != 1)
    throw KirillovError("Jacobi pair needs a vector field");
  if (!bivector_.chart().same_coordinates(field_.chart()))
    throw KirillovError("Jacobi pair: bivector and vector field live on different charts");
}

JacobiPair JacobiPair::zero(const Chart &base) { return JacobiPair(Multivector(base, 2), Multivector(base, 1)); }

template <TensorKind K> ZeroVerdict tensor_is_zero(const Alternating<K> &T, const ZeroOptions &options) {
  ZeroVerdict out;
  out.status = ZeroStatus::proved_zero;
  for (const auto &[I, c] : T.components()) {
    ZeroVerdict v = is_zero(c, options);
    if (!v.is_zero())
      return v;
    if (v.status == ZeroStatus::numeric_zero && out.status == ZeroStatus::proved_zero)
      out = v;
  }
  return out;
}

template ZeroVerdict tensor_is_zero(const Multivector &, const ZeroOptions &);
template ZeroVerdict tensor_is_zero(const DifferentialForm &, const ZeroOptions &);

KirillovStructure kirillov_structure(Multivector lambda, Symbol parameter, const ZeroOptions &options) {
  if (lambda.degree() != 2)
    throw KirillovError("Kirillov structure needs a bivector");
  if (!lambda.chart().fiber())
    throw KirillovError("chart '" + lambda.chart().name() + "' has no fiber coordinate");
  KirillovStructure k;
  k.total = lambda.chart();
  k.lambda = std::move(lambda);
  k.action = RxAction::fiber_scaling(k.total, parameter);
  k.jacobiator = schouten(k.lambda, k.lambda);
  std::vector<std::pair<std::string, RationalFunction>> comps;
  for (const auto &[I, c] : k.jacobiator.components())
    comps.emplace_back(k.jacobiator.label(I), c);
  k.poisson = certify_all_zero("[Lambda, Lambda] = 0", comps, options);
  k.homogeneity = homogeneity_degree(k.lambda, k.action, options);
  return k;
}

KirillovStructure poissonise(const JacobiPair &pair, std::string_view fiber, std::string_view parameter,
                             const ZeroOptions &options) {
  const Chart &base = pair.base();
  Symbol t = coordinate(fiber);
  if (base.contains(t))
    throw KirillovError("fiber coordinate '" + t.name() + "' already belongs to the base chart");
  std::vector<Symbol> coords{t};
  coords.insert(coords.end(), base.coords().begin(), base.coords().end());
  Chart total(base.name() + "^x", coords, t);
  RationalFunction inv_t = RationalFunction(1L) / sym(t);
  Multivector lambda(total, 2);
  // (1/2t) L^{ab} d_a^d_b over all a, b is (1/t) L^{ab} d_a^d_b over a < b.
  for (const auto &[I, c] : pair.bivector().components())
    lambda.set({I[0] + 1, I[1] + 1}, c * inv_t);
  for (const auto &[I, c] : pair.field().components())
    lambda.set({0, I[0] + 1}, c);
  return kirillov_structure(std::move(lambda), klab::parameter(parameter), options);
}

RationalFunction kirillov_bracket(const JacobiPair &pair, const RationalFunction &f, const RationalFunction &g) {
  const Chart &base = pair.base();
  require_base_function(base, f, "first argument");
  require_base_function(base, g, "second argument");
  std::vector<RationalFunction> df, dg;
  for (Symbol q : base.coords()) {
    df.push_back(derivative(f, q));
    dg.push_back(derivative(g, q));
  }
  RationalFunction out;
  for (const auto &[I, c] : pair.bivector().components())
    out = out + c * (df[I[0]] * dg[I[1]] - df[I[1]] * dg[I[0]]);
  for (const auto &[I, c] : pair.field().components())
    out = out + c * (f * dg[I[0]] - df[I[0]] * g);
  return out;
}

RationalFunction iota(const RationalFunction &u, const KirillovStructure &k) {
  Chart base(k.total.name(), std::vector<Symbol>(k.total.coords().begin() + 1, k.total.coords().end()));
  require_base_function(base, u, "section");
  return sym(k.fiber()) * u;
}

RationalFunction poisson_bracket(const KirillovStructure &k, const RationalFunction &F, const RationalFunction &G) {
  return pairing(k.lambda, differential(k.total, F), differential(k.total, G));
}

E1Report check_e1(const JacobiPair &pair, const RationalFunction &u, const RationalFunction &v,
                  const ZeroOptions &options) {
  KirillovStructure k = poissonise(pair, "t", "s", options);
  E1Report rep;
  rep.lhs = iota(kirillov_bracket(pair, u, v), k);
  rep.rhs = poisson_bracket(k, iota(u, k), iota(v, k));
  rep.verdict = is_zero(rep.lhs - rep.rhs, options);
  return rep;
}

JacobiReport is_jacobi(const JacobiPair &pair, const ZeroOptions &options) {
  KirillovStructure k = poissonise(pair, "t", "s", options);
  JacobiReport rep;
  rep.residual = k.jacobiator;
  rep.verdict = tensor_is_zero(rep.residual, options);
  rep.base_residual = schouten(pair.bivector(), pair.bivector());
  return rep;
}

CoisotropicReport coisotropic_check(const KirillovStructure &k, const std::vector<Symbol> &vanishing,
                                    const ZeroOptions &options) {
  const Chart &chart = k.total;
  std::vector<int> ys;
  for (Symbol y : vanishing) {
    int i = chart.index_of(y);
    if (i < 0)
      throw KirillovError("'" + y.name() + "' is not a coordinate of chart '" + chart.name() + "'");
    if (y == k.fiber())
      throw KirillovError("the fiber coordinate cannot be a vanishing coordinate");
    if (std::find(ys.begin(), ys.end(), i) != ys.end())
      throw KirillovError("repeated vanishing coordinate '" + y.name() + "'");
    ys.push_back(i);
  }
  std::map<Symbol, RationalFunction> on_s;
  for (Symbol y : vanishing)
    on_s.emplace(y, RationalFunction());
  int t = chart.index_of(k.fiber());
  std::vector<std::pair<std::string, RationalFunction>> bi, fi;
  for (std::size_t a = 0; a < ys.size(); ++a) {
    for (std::size_t b = a + 1; b < ys.size(); ++b)
      bi.emplace_back("Lambda" + k.lambda.label({ys[a], ys[b]}), substitute(k.lambda.get({ys[a], ys[b]}), on_s));
    fi.emplace_back("Lambda" + k.lambda.label({t, ys[a]}), substitute(k.lambda.get({t, ys[a]}), on_s));
  }
  CoisotropicReport rep;
  rep.bivector_block = certify_all_zero("Lambda^{ij} = 0 on S", bi, options);
  rep.field_block = certify_all_zero("Lambda^{i} = 0 on S", fi, options);
  return rep;
}

Multivector hamiltonian_vf(const KirillovStructure &k, const RationalFunction &h) {
  return sharp(k.lambda, differential(k.total, h));
}

bool AlgebroidReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Certificate &c) { return c.passed(); });
}

AlgebroidReport algebroid_form_check(const Multivector &lambda, const std::vector<Symbol> &x_block,
                                     const std::vector<Symbol> &y_block, const ZeroOptions &options) {
  const Chart &chart = lambda.chart();
  if (lambda.degree() != 2)
    throw KirillovError("algebroid form check needs a bivector");
  if (!chart.fiber())
    throw KirillovError("chart '" + chart.name() + "' has no fiber coordinate");
  Symbol t = *chart.fiber();
  std::vector<int> xs, ys;
  std::vector<bool> used(static_cast<std::size_t>(chart.dim()), false);
  used[static_cast<std::size_t>(chart.index_of(t))] = true;
  auto place = [&](const std::vector<Symbol> &block, std::vector<int> &out) {
    for (Symbol q : block) {
      int i = chart.index_of(q);
      if (i < 0)
        throw KirillovError("'" + q.name() + "' is not a coordinate of chart '" + chart.name() + "'");
      if (used[static_cast<std::size_t>(i)])
        throw KirillovError("coordinate '" + q.name() + "' appears in more than one block");
      used[static_cast<std::size_t>(i)] = true;
      out.push_back(i);
    }
  };
  place(x_block, xs);
  place(y_block, ys);
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw KirillovError("blocks do not cover the chart '" + chart.name() + "'");
  int ti = chart.index_of(t);

  AlgebroidReport rep;
  auto record = [&](Certificate c, const std::string &block) {
    if (!c.passed() && rep.failed_block.empty())
      rep.failed_block = block;
    rep.checks.push_back(std::move(c));
  };

  Symbol s = SymbolTable::global().fresh("s", SymbolKind::parameter);
  Symbol u = SymbolTable::global().fresh("u", SymbolKind::parameter);
  RxAction h = RxAction::fiber_scaling(chart, s);
  std::vector<RationalFunction> l_images;
  for (int i = 0; i < chart.dim(); ++i) {
    bool is_y = std::find(ys.begin(), ys.end(), i) != ys.end();
    l_images.push_back(is_y ? sym(u) * sym(chart[i]) : sym(chart[i]));
  }
  RxAction l(chart, u, l_images, options);

  auto degree_cert = [&](const RxAction &act, const std::string &name) {
    HomogeneityReport d = homogeneity_degree(lambda, act, options);
    if (d.status == HomogeneityReport::Status::every_degree)
      return pass(name, "zero bivector");
    if (d.homogeneous_of(-1))
      return Certificate{name, d.finite.verdict, d.finite.detail, d.finite.witnesses};
    return fail(name, d.describe());
  };
  record(degree_cert(h, "degree -1 under t-scaling"), "degree in t");
  record(degree_cert(l, "degree -1 under y-scaling"), "degree in y");

  std::vector<std::pair<std::string, RationalFunction>> xx, tx;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = a + 1; b < xs.size(); ++b)
      xx.emplace_back(lambda.label({xs[a], xs[b]}), lambda.get({xs[a], xs[b]}));
    tx.emplace_back(lambda.label({ti, xs[a]}), lambda.get({ti, xs[a]}));
  }
  record(certify_all_zero("forbidden (x,x) block vanishes", xx, options), "(x,x)");
  record(certify_all_zero("forbidden (t,x) block vanishes", tx, options), "(t,x)");

  RationalFunction tt = sym(t);
  std::map<Symbol, RationalFunction> y_zero;
  for (int i : ys)
    y_zero.emplace(chart[i], RationalFunction());

  std::vector<std::pair<std::string, RationalFunction>> mixed_res, linear_res, anchor_res;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t a = 0; a < xs.size(); ++a) {
      RationalFunction m = tt * lambda.get({xs[a], ys[i]});
      rep.mixed[{static_cast<int>(i), static_cast<int>(a)}] = m;
      std::string lbl = lambda.label({xs[a], ys[i]});
      mixed_res.emplace_back(lbl + " d/dt", derivative(m, t));
      for (int k : ys)
        mixed_res.emplace_back(lbl + " d/d" + chart[k].name(), derivative(m, chart[k]));
    }
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
      RationalFunction c = tt * lambda.get({ys[i], ys[j]});
      std::string lbl = lambda.label({ys[i], ys[j]});
      linear_res.emplace_back(lbl + " d/dt", derivative(c, t));
      linear_res.emplace_back(lbl + " at y = 0", substitute(c, y_zero));
      for (std::size_t k = 0; k < ys.size(); ++k) {
        RationalFunction dk = derivative(c, chart[ys[k]]);
        rep.linear[{static_cast<int>(k), static_cast<int>(i), static_cast<int>(j)}] = -dk;
        for (std::size_t l2 = k; l2 < ys.size(); ++l2)
          linear_res.emplace_back(lbl + " second y-derivative", derivative(dk, chart[ys[l2]]));
      }
    }
    RationalFunction an = lambda.get({ti, ys[i]});
    rep.anchor[static_cast<int>(i)] = -an;
    std::string lbl = lambda.label({ti, ys[i]});
    anchor_res.emplace_back(lbl + " d/dt", derivative(an, t));
    for (int k : ys)
      anchor_res.emplace_back(lbl + " d/d" + chart[k].name(), derivative(an, chart[k]));
  }
  record(certify_all_zero("(x,y) block is (1/t) L^{ia}(x)", mixed_res, options), "(x,y)");
  record(certify_all_zero("(y,y) block is (1/t) y^k L_k^{ij}(x)", linear_res, options), "(y,y)");
  record(certify_all_zero("(t,y) block is L^i(x)", anchor_res, options), "(t,y)");
  return rep;
}

} // namespace klab
