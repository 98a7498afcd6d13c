#include "klab/lifts.hpp"

#include <sstream>

namespace klab {

namespace {

RationalFunction sym(Symbol s) { return Expression(s).normal_form(); }

RationalFunction power_of(const RationalFunction &s, int k) {
  RationalFunction out(1L);
  for (int i = 0; i < (k < 0 ? -k : k); ++i)
    out = out * s;
  return k < 0 ? RationalFunction(1L) / out : out;
}

Chart doubled(const Chart &base, const std::string &prefix, Symbol (*lift)(Symbol)) {
  std::vector<Symbol> coords = base.coords();
  for (Symbol q : base.coords())
    coords.push_back(lift(q));
  return Chart(prefix + base.name(), std::move(coords), base.fiber());
}

Symbol invariant_of(Symbol q) { return coordinate(q.name() + "__inv"); }

} // namespace

Symbol velocity_of(Symbol q) { return coordinate("d_" + q.name()); }
Symbol momentum_of(Symbol q) { return coordinate("p_" + q.name()); }

Chart tangent_chart(const Chart &base) { return doubled(base, "T", &velocity_of); }
Chart cotangent_chart(const Chart &base) { return doubled(base, "T*", &momentum_of); }

RxAction tangent_action(const RxAction &h, int k, const ZeroOptions &options) {
  const Chart &base = h.chart();
  int n = base.dim();
  RationalFunction sk = power_of(sym(h.parameter()), k);
  std::vector<RationalFunction> images = h.images();
  for (int a = 0; a < n; ++a) {
    RationalFunction v;
    for (int b = 0; b < n; ++b)
      v = v + h.map().jacobian(a, b) * sym(velocity_of(base[b]));
    images.push_back(sk * v);
  }
  return RxAction(tangent_chart(base), h.parameter(), std::move(images), options);
}

RxAction phase_action(const RxAction &h, int k, const ZeroOptions &options) {
  const Chart &base = h.chart();
  int n = base.dim();
  RationalFunction sk1 = power_of(sym(h.parameter()), k + 1);
  const CoordMap &inv = h.inverse_map();
  std::vector<RationalFunction> images = h.images();
  for (int a = 0; a < n; ++a) {
    RationalFunction p;
    for (int b = 0; b < n; ++b)
      p = p + h.map().pull(inv.jacobian(b, a)) * sym(momentum_of(base[b]));
    images.push_back(sk1 * p);
  }
  return RxAction(cotangent_chart(base), h.parameter(), std::move(images), options);
}

Multivector tangent_lift(const Multivector &P) {
  const Chart &base = P.chart();
  int n = base.dim();
  Multivector out(tangent_chart(base), P.degree());
  for (const auto &[I, c] : P.components()) {
    Index dotted;
    for (int i : I)
      dotted.push_back(i + n);
    RationalFunction vc;
    for (int q = 0; q < n; ++q)
      vc = vc + sym(velocity_of(base[q])) * derivative(c, base[q]);
    out.add(dotted, vc);
    for (std::size_t i = 0; i < I.size(); ++i) {
      Index one = dotted;
      one[i] = I[i];
      out.add(one, c);
    }
  }
  return out;
}

DifferentialForm canonical_symplectic_form(const Chart &base) {
  Chart tp = cotangent_chart(base);
  DifferentialForm w(tp, 2);
  for (Symbol q : base.coords())
    w = w + wedge(coordinate_form(tp, momentum_of(q)), coordinate_form(tp, q));
  return w;
}

IntertwineReport intertwine_check(const Multivector &lambda, const RxAction &h, const ZeroOptions &options) {
  if (lambda.degree() != 2)
    throw LiftError("intertwining check needs a bivector");
  const Chart &base = h.chart();
  if (!lambda.chart().same_coordinates(base))
    throw LiftError("bivector and action live on different charts");
  int n = base.dim();
  RxAction phase = phase_action(h, 0, options);
  std::vector<RationalFunction> p, moved;
  for (int b = 0; b < n; ++b) {
    p.push_back(sym(momentum_of(base[b])));
    moved.push_back(phase.images()[static_cast<std::size_t>(n + b)]);
  }
  std::vector<RationalFunction> v(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      v[a] = v[a] + lambda.get({a, b}) * p[b];

  IntertwineReport rep;
  std::vector<std::pair<std::string, RationalFunction>> res;
  for (int a = 0; a < n; ++a) {
    RationalFunction lhs, rhs;
    for (int b = 0; b < n; ++b) {
      lhs = lhs + h.map().jacobian(a, b) * v[b];
      rhs = rhs + h.map().pull(lambda.get({a, b})) * moved[b];
    }
    rep.tangent_after_sharp.push_back(lhs);
    rep.sharp_after_phase.push_back(rhs);
    rep.residual.push_back(lhs - rhs);
    res.emplace_back(velocity_of(base[a]).name(), lhs - rhs);
  }
  rep.equality = certify_all_zero("Th_s o L^# = L^# o T*h_s", res, options);
  rep.homogeneity = homogeneity_degree(lambda, h, options);
  return rep;
}

bool LinearIdentification::passed() const {
  for (const auto &[name, r] : invariance)
    if (!r.homogeneous_of(0))
      return false;
  return true;
}

LinearIdentification linear_rx_identification(LinearBundle which, const RxAction &h, const ZeroOptions &options) {
  const Chart &base = h.chart();
  if (!base.fiber())
    throw LiftError("chart '" + base.name() + "' has no fiber coordinate");
  RxAction standard = RxAction::fiber_scaling(base, h.parameter());
  for (std::size_t i = 0; i < h.images().size(); ++i)
    if (!(h.images()[i] == standard.images()[i]))
      throw LiftError("linear identification needs the standard fiber scaling action");
  Symbol t = *base.fiber();
  RationalFunction tt = sym(t);
  bool tangent = which == LinearBundle::tangent;
  RxAction lifted = tangent ? tangent_action(h, 0, options) : phase_action(h, 0, options);
  const Chart &src = lifted.chart();
  int n = base.dim();

  std::vector<Symbol> coords = base.coords();
  std::vector<RationalFunction> images, inverse;
  for (Symbol q : base.coords()) {
    images.push_back(sym(q));
    inverse.push_back(sym(q));
  }
  for (int i = 0; i < n; ++i) {
    Symbol q = base[i];
    Symbol lifted_q = src[n + i];
    // Velocity of t and momenta of x carry weight 1.
    bool rescale = tangent ? q == t : q != t;
    Symbol target = rescale ? invariant_of(lifted_q) : lifted_q;
    coords.push_back(target);
    images.push_back(rescale ? sym(lifted_q) / tt : sym(lifted_q));
    inverse.push_back(rescale ? sym(target) * tt : sym(target));
  }
  Chart dst((tangent ? "T0" : "T*0") + base.name(), coords, t);

  LinearIdentification out;
  out.which = which;
  out.map = CoordMap(src, dst, images, inverse, std::nullopt, options);
  for (int i = 0; i < dst.dim(); ++i) {
    if (dst[i] == t)
      continue;
    out.invariance.emplace_back(dst[i].name(), homogeneity_degree(images[static_cast<std::size_t>(i)], lifted, options));
  }
  return out;
}

std::string ReducedMorphism::to_string() const {
  std::ostringstream os;
  os << "[" ;
  for (std::size_t c = 0; c < columns.size(); ++c)
    os << (c ? ", " : "") << columns[c];
  os << "] ->\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << "  " << rows[r] << ": [";
    for (std::size_t c = 0; c < matrix[r].size(); ++c)
      os << (c ? ", " : "") << format(matrix[r][c]);
    os << "]\n";
  }
  return os.str();
}

ReducedMorphism reduce_trivial(const Multivector &lambda, const ZeroOptions &options) {
  if (lambda.degree() != 2)
    throw LiftError("reduction needs a bivector");
  const Chart &chart = lambda.chart();
  if (!chart.fiber())
    throw LiftError("chart '" + chart.name() + "' has no fiber coordinate");
  Symbol t = *chart.fiber();
  int ti = chart.index_of(t);
  RationalFunction tt = sym(t);
  std::vector<int> xs;
  for (int i = 0; i < chart.dim(); ++i)
    if (i != ti)
      xs.push_back(i);

  ReducedMorphism out;
  out.rows.push_back(velocity_of(t).name() + "/" + t.name());
  out.columns.push_back(momentum_of(t).name());
  for (int i : xs) {
    out.rows.push_back(velocity_of(chart[i]).name());
    out.columns.push_back(momentum_of(chart[i]).name() + "/" + t.name());
  }
  // d_t/t = L^{tb} P_b ; d_x^a = L^{at} p_t + t L^{ab} P_b, with P_b = p_b / t.
  Matrix m;
  std::vector<RationalFunction> row{RationalFunction()};
  for (int b : xs)
    row.push_back(lambda.get({ti, b}));
  m.push_back(row);
  for (int a : xs) {
    row = {lambda.get({a, ti})};
    for (int b : xs)
      row.push_back(tt * lambda.get({a, b}));
    m.push_back(row);
  }
  std::vector<std::pair<std::string, RationalFunction>> res;
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[r].size(); ++c)
      res.emplace_back(out.rows[r] + " <- " + out.columns[c], derivative(m[r][c], t));
  out.invariance = certify_all_zero("reduced entries are free of " + t.name(), res, options);
  if (!out.invariance.passed())
    out.residual = out.invariance.detail;
  for (auto &r : m)
    for (auto &e : r)
      e = substitute(e, {{t, RationalFunction(1L)}});
  out.matrix = std::move(m);
  return out;
}

TangentAlgebroid tangent_algebroid(const KirillovStructure &k, const ZeroOptions &options) {
  TangentAlgebroid out;
  out.lifted = tangent_lift(k.lambda);
  LinearIdentification id = linear_rx_identification(LinearBundle::tangent, k.action, options);
  out.adapted = pushforward(id.map, out.lifted);
  const Chart &chart = id.invariant_chart();
  int n = k.total.dim();
  for (int i = 0; i < n; ++i)
    if (chart[i] != k.fiber())
      out.x_block.push_back(chart[i]);
  for (int i = n; i < chart.dim(); ++i)
    out.y_block.push_back(chart[i]);
  out.report = algebroid_form_check(out.adapted, out.x_block, out.y_block, options);
  return out;
}

} // namespace klab
