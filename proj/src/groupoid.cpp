#include "klab/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace klab {

namespace {

using Images = std::vector<RationalFunction>;

RationalFunction sym(Symbol s) { return Expression(s).normal_form(); }

Images coords_of(const Chart &c) {
  Images out;
  for (Symbol q : c.coords())
    out.push_back(sym(q));
  return out;
}

Images concat(Images a, const Images &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Symbol> concat(std::vector<Symbol> a, const std::vector<Symbol> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Images slice(const Images &v, std::size_t from, std::size_t count) {
  return Images(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + count));
}

ZeroOptions at_least(ZeroOptions o, int samples = 32) {
  o.samples = std::max(o.samples, samples);
  return o;
}

Certificate map_equal(std::string name, const Images &lhs, const Images &rhs, const Chart &labels,
                      const ZeroOptions &options) {
  if (lhs.size() != rhs.size())
    throw GroupoidError(name + ": image size mismatch");
  std::vector<std::pair<std::string, RationalFunction>> res;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    res.emplace_back(labels[static_cast<int>(i)].name(), lhs[i] - rhs[i]);
  return certify_all_zero(std::move(name), res, options);
}

Images substitute_all(const Images &f, const std::map<Symbol, RationalFunction> &b) {
  Images out;
  out.reserve(f.size());
  for (const auto &r : f)
    out.push_back(substitute(r, b));
  return out;
}

void check_size(const Images &v, const Chart &c, const std::string &what) {
  if (static_cast<int>(v.size()) != c.dim())
    throw GroupoidError(what + " needs " + std::to_string(c.dim()) + " images, got " + std::to_string(v.size()));
}

std::string coord_name(const std::string &stem, int i, int n) { return n == 1 ? stem : stem + std::to_string(i + 1); }

// Tangent lift of a map given by images in the coordinates of `source`.
Images lift_images(const Images &f, const Chart &source) {
  Images out = f;
  for (const auto &fi : f) {
    RationalFunction v;
    for (Symbol q : source.coords())
      v = v + derivative(fi, q) * sym(velocity_of(q));
    out.push_back(v);
  }
  return out;
}

Images reorder(const Images &v, const Chart &from, const Chart &to) {
  Images out;
  for (Symbol q : to.coords()) {
    int i = from.index_of(q);
    if (i < 0)
      throw GroupoidError("coordinate '" + q.name() + "' missing from chart '" + from.name() + "'");
    out.push_back(v[static_cast<std::size_t>(i)]);
  }
  return out;
}

DifferentialForm embed_form(const DifferentialForm &w, const Chart &target) {
  DifferentialForm out(target, w.degree());
  for (const auto &[I, c] : w.components()) {
    Index J;
    for (int i : I) {
      int j = target.index_of(w.chart()[i]);
      if (j < 0)
        throw GroupoidError("coordinate '" + w.chart()[i].name() + "' missing from chart '" + target.name() + "'");
      J.push_back(j);
    }
    out.add(J, c);
  }
  return out;
}

// Values are exact rationals while every input and every map is rational.
struct Num {
  mpq_class q;
  double d = 0;
  bool exact = true;

  static Num of(const mpq_class &v) { return {v, v.get_d(), true}; }
  static Num approx(double v) { return {mpq_class(0), v, false}; }
  friend Num operator+(const Num &a, const Num &b) {
    return a.exact && b.exact ? of(a.q + b.q) : approx(a.d + b.d);
  }
  friend Num operator-(const Num &a, const Num &b) {
    return a.exact && b.exact ? of(a.q - b.q) : approx(a.d - b.d);
  }
  friend Num operator*(const Num &a, const Num &b) {
    return a.exact && b.exact ? of(a.q * b.q) : approx(a.d * b.d);
  }
  bool is_zero(double tol) const { return exact ? q == 0 : std::abs(d) < tol; }
  double magnitude() const { return exact ? std::abs(q.get_d()) : std::abs(d); }
  std::string text() const {
    if (exact)
      return q.get_str();
    std::ostringstream os;
    os.precision(12);
    os << d;
    return os.str();
  }
};

using NumPoint = std::map<Symbol, Num>;

double no_formal(Symbol f, const MultiIndex &, const std::vector<double> &) {
  throw GroupoidError("formal function '" + f.name() + "' cannot be evaluated at a sample point");
}

std::optional<Num> eval(const RationalFunction &r, const NumPoint &p, double pole_radius) {
  bool exact = is_rational(r);
  for (const auto &[s, v] : p)
    exact = exact && v.exact;
  if (exact) {
    std::map<Symbol, mpq_class> q;
    for (const auto &[s, v] : p)
      q.emplace(s, v.q);
    auto v = evaluate_exact(r, q);
    if (!v)
      return std::nullopt;
    return Num::of(*v);
  }
  std::map<Symbol, double> d;
  for (const auto &[s, v] : p)
    d.emplace(s, v.d);
  auto v = evaluate(r, d, no_formal, pole_radius);
  if (!v)
    return std::nullopt;
  return Num::approx(v->value);
}

std::optional<std::vector<Num>> eval_all(const Images &f, const NumPoint &p, double pole_radius) {
  std::vector<Num> out;
  for (const auto &r : f) {
    auto v = eval(r, p, pole_radius);
    if (!v)
      return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

NumPoint bind_point(const Chart &c, const std::vector<Num> &v) {
  NumPoint out;
  for (int i = 0; i < c.dim(); ++i)
    out.emplace(c[i], v[static_cast<std::size_t>(i)]);
  return out;
}

NumPoint to_num(const Point &p) {
  NumPoint out;
  for (const auto &[s, v] : p)
    out.emplace(s, Num::of(v));
  return out;
}

std::vector<Num> random_vector(RationalSampler &rs, int n) {
  std::vector<Num> out;
  for (int i = 0; i < n; ++i)
    out.push_back(Num::of(rs.next()));
  return out;
}

std::string describe_point(const NumPoint &p) {
  std::string out;
  for (const auto &[s, v] : p)
    out += (out.empty() ? "" : ", ") + s.name() + " = " + v.text();
  return out;
}

// J(point) * v for a map with images in the coordinates of `source`.
std::optional<std::vector<Num>> push_vector(const CoordMap &f, const NumPoint &at, const std::vector<Num> &v,
                                            double pole_radius) {
  std::vector<Num> out;
  for (int i = 0; i < f.target().dim(); ++i) {
    Num acc = Num::of(0);
    for (int j = 0; j < f.source().dim(); ++j) {
      const RationalFunction &J = f.jacobian(i, j);
      if (J.is_zero())
        continue;
      auto x = eval(J, at, pole_radius);
      if (!x)
        return std::nullopt;
      acc = acc + *x * v[static_cast<std::size_t>(j)];
    }
    out.push_back(acc);
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// CoordGroupoid

Symbol left_copy(Symbol q) { return coordinate(q.name() + "__L"); }
Symbol right_copy(Symbol q) { return coordinate(q.name() + "__R"); }

CoordGroupoid::CoordGroupoid(std::string name, Chart arrows, Chart units, Chart pairs, Chart triples, GroupoidMaps maps)
    : name_(std::move(name)), arrows_(std::move(arrows)), units_(std::move(units)), pairs_(std::move(pairs)),
      triples_(std::move(triples)), maps_(std::move(maps)) {
  check_size(maps_.source, units_, "source");
  check_size(maps_.target, units_, "target");
  check_size(maps_.unit, arrows_, "unit");
  check_size(maps_.inverse, arrows_, "inverse");
  check_size(maps_.pr1, arrows_, "pr1");
  check_size(maps_.pr2, arrows_, "pr2");
  check_size(maps_.mult, arrows_, "multiplication");
  check_size(maps_.pair, pairs_, "pair");
  check_size(maps_.q1, arrows_, "q1");
  check_size(maps_.q2, arrows_, "q2");
  check_size(maps_.q3, arrows_, "q3");
  std::vector<Symbol> c;
  for (Symbol q : arrows_.coords())
    c.push_back(left_copy(q));
  for (Symbol q : arrows_.coords())
    c.push_back(right_copy(q));
  copies_ = Chart(arrows_.name() + "^2", c);
  source_ = CoordMap(arrows_, units_, maps_.source);
  target_ = CoordMap(arrows_, units_, maps_.target);
  unit_ = CoordMap(units_, arrows_, maps_.unit);
  inverse_ = CoordMap(arrows_, arrows_, maps_.inverse);
  pr1_ = CoordMap(pairs_, arrows_, maps_.pr1);
  pr2_ = CoordMap(pairs_, arrows_, maps_.pr2);
  mult_ = CoordMap(pairs_, arrows_, maps_.mult);
  pair_ = CoordMap(copies_, pairs_, maps_.pair);
  q1_ = CoordMap(triples_, arrows_, maps_.q1);
  q2_ = CoordMap(triples_, arrows_, maps_.q2);
  q3_ = CoordMap(triples_, arrows_, maps_.q3);
}

Images CoordGroupoid::pair_of(const Images &g, const Images &h) const {
  check_size(g, arrows_, "pair_of (first)");
  check_size(h, arrows_, "pair_of (second)");
  return compose(maps_.pair, copies_, concat(g, h));
}

Images compose(const Images &f, const Chart &chart, const Images &values) {
  check_size(values, chart, "composition");
  std::map<Symbol, RationalFunction> b;
  for (int i = 0; i < chart.dim(); ++i)
    b.emplace(chart[i], values[static_cast<std::size_t>(i)]);
  return substitute_all(f, b);
}

bool axiom::involves_target(std::string_view name) {
  return name == target_unit || name == target_mult || name == target_inverse;
}

bool GroupoidReport::passed() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const Certificate &c) { return c.passed(); });
}

std::vector<std::string> GroupoidReport::failed() const {
  std::vector<std::string> out;
  for (const auto &c : axioms)
    if (!c.passed())
      out.push_back(c.name);
  return out;
}

const Certificate *GroupoidReport::find(std::string_view name) const {
  for (const auto &c : axioms)
    if (c.name == name)
      return &c;
  return nullptr;
}

GroupoidReport verify_groupoid(const CoordGroupoid &G, const ZeroOptions &options) {
  ZeroOptions z = at_least(options);
  const GroupoidMaps &m = G.maps();
  const Chart &A = G.arrows(), &U = G.units(), &P = G.pairs();
  Images a = coords_of(A), u = coords_of(U), p = coords_of(P);
  auto src = [&](const Images &g) { return compose(m.source, A, g); };
  auto tgt = [&](const Images &g) { return compose(m.target, A, g); };
  auto unit = [&](const Images &x) { return compose(m.unit, U, x); };
  auto inv = [&](const Images &g) { return compose(m.inverse, A, g); };
  auto mul = [&](const Images &g, const Images &h) { return compose(m.mult, P, G.pair_of(g, h)); };

  GroupoidReport rep;
  auto add = [&](Certificate c) { rep.axioms.push_back(std::move(c)); };
  add(map_equal(axiom::composable, src(m.pr1), tgt(m.pr2), U, z));
  add(map_equal(axiom::pair_chart, G.pair_of(m.pr1, m.pr2), p, P, z));
  add(map_equal(axiom::source_unit, compose(m.source, A, m.unit), u, U, z));
  add(map_equal(axiom::target_unit, compose(m.target, A, m.unit), u, U, z));
  add(map_equal(axiom::source_mult, src(m.mult), src(m.pr2), U, z));
  add(map_equal(axiom::target_mult, tgt(m.mult), tgt(m.pr1), U, z));
  add(map_equal(axiom::left_unit, mul(unit(tgt(a)), a), a, A, z));
  add(map_equal(axiom::right_unit, mul(a, unit(src(a))), a, A, z));
  add(map_equal(axiom::source_inverse, src(m.inverse), tgt(a), U, z));
  add(map_equal(axiom::target_inverse, tgt(m.inverse), src(a), U, z));
  add(map_equal(axiom::left_inverse, mul(a, inv(a)), unit(tgt(a)), A, z));
  add(map_equal(axiom::right_inverse, mul(inv(a), a), unit(src(a)), A, z));
  Images lhs = concat(src(m.q1), src(m.q2)), rhs = concat(tgt(m.q2), tgt(m.q3));
  std::vector<Symbol> two;
  for (Symbol q : U.coords())
    two.push_back(left_copy(q));
  for (Symbol q : U.coords())
    two.push_back(right_copy(q));
  Chart uu(U.name() + "^2", two);
  add(map_equal(axiom::triples, lhs, rhs, uu, z));
  add(map_equal(axiom::associativity, mul(mul(m.q1, m.q2), m.q3), mul(m.q1, mul(m.q2, m.q3)), A, z));
  return rep;
}

// ---------------------------------------------------------------------------
// Constructions

CoordGroupoid pair_groupoid(int n) {
  if (n < 1)
    throw GroupoidError("pair groupoid needs n >= 1");
  std::vector<Symbol> x, y, z, w, u;
  for (int i = 0; i < n; ++i) {
    x.push_back(coordinate(coord_name("x", i, n)));
    y.push_back(coordinate(coord_name("y", i, n)));
    z.push_back(coordinate(coord_name("z", i, n)));
    w.push_back(coordinate(coord_name("w", i, n)));
    u.push_back(coordinate(coord_name("u", i, n)));
  }
  auto rf = [](const std::vector<Symbol> &v) {
    Images out;
    for (Symbol s : v)
      out.push_back(sym(s));
    return out;
  };
  auto copies = [](const std::vector<Symbol> &v, Symbol (*f)(Symbol)) {
    Images out;
    for (Symbol s : v)
      out.push_back(sym(f(s)));
    return out;
  };
  std::string dim = "R" + (n == 1 ? std::string() : "^" + std::to_string(n));
  Chart arrows("Pair(" + dim + ")", concat(x, y));
  Chart units(dim, u);
  Chart pairs("Pair(" + dim + ")^(2)", concat(concat(x, y), z));
  Chart triples("Pair(" + dim + ")^(3)", concat(concat(concat(x, y), z), w));
  GroupoidMaps m;
  m.source = rf(y);
  m.target = rf(x);
  m.unit = concat(rf(u), rf(u));
  m.inverse = concat(rf(y), rf(x));
  m.pr1 = concat(rf(x), rf(y));
  m.pr2 = concat(rf(y), rf(z));
  m.mult = concat(rf(x), rf(z));
  m.pair = concat(copies(x, &left_copy), concat(copies(y, &left_copy), copies(y, &right_copy)));
  m.q1 = m.pr1;
  m.q2 = m.pr2;
  m.q3 = concat(rf(z), rf(w));
  return CoordGroupoid(arrows.name(), arrows, units, pairs, triples, std::move(m));
}

CoordGroupoid lie_group(std::string name, const std::vector<std::string> &coords, const Images &identity,
                        const Images &mult, const Images &inverse) {
  std::vector<Symbol> c1, c2, c3;
  for (const auto &c : coords) {
    c1.push_back(coordinate(c));
    c2.push_back(coordinate(c + "_2"));
    c3.push_back(coordinate(c + "_3"));
  }
  Chart arrows(name, c1);
  Chart units("pt", {});
  Chart pairs(name + "^(2)", concat(c1, c2));
  Chart triples(name + "^(3)", concat(concat(c1, c2), c3));
  check_size(identity, arrows, "identity");
  check_size(mult, arrows, "multiplication");
  check_size(inverse, arrows, "inverse");
  auto rf = [](const std::vector<Symbol> &v) {
    Images out;
    for (Symbol s : v)
      out.push_back(sym(s));
    return out;
  };
  GroupoidMaps m;
  m.unit = identity;
  m.inverse = inverse;
  m.pr1 = rf(c1);
  m.pr2 = rf(c2);
  m.mult = mult;
  for (Symbol s : c1)
    m.pair.push_back(sym(left_copy(s)));
  for (Symbol s : c1)
    m.pair.push_back(sym(right_copy(s)));
  m.q1 = rf(c1);
  m.q2 = rf(c2);
  m.q3 = rf(c3);
  return CoordGroupoid(std::move(name), arrows, units, pairs, triples, std::move(m));
}

CoordGroupoid multiplicative_group(std::string_view name) {
  std::string r(name);
  Symbol a = coordinate(r), b = coordinate(r + "_2");
  CoordGroupoid g = lie_group("R^x", {r}, {RationalFunction(1L)}, {sym(a) * sym(b)}, {RationalFunction(1L) / sym(a)});
  return g;
}

CoordGroupoid unit_groupoid(const Chart &chart) {
  Images id = coords_of(chart);
  GroupoidMaps m;
  m.source = m.target = m.unit = m.inverse = id;
  m.pr1 = m.pr2 = m.mult = id;
  for (Symbol q : chart.coords())
    m.pair.push_back(sym(right_copy(q)));
  m.q1 = m.q2 = m.q3 = id;
  Chart arrows(chart.name(), chart.coords(), chart.fiber());
  return CoordGroupoid(chart.name(), arrows, chart, Chart(chart.name() + "^(2)", chart.coords(), chart.fiber()),
                       Chart(chart.name() + "^(3)", chart.coords(), chart.fiber()), std::move(m));
}

CoordGroupoid product(const CoordGroupoid &A, const CoordGroupoid &B) {
  std::set<Symbol> a;
  for (const Chart *c : {&A.arrows(), &A.units(), &A.pairs(), &A.triples()})
    a.insert(c->coords().begin(), c->coords().end());
  for (const Chart *c : {&B.arrows(), &B.units(), &B.pairs(), &B.triples()})
    for (Symbol q : c->coords())
      if (a.count(q))
        throw GroupoidError("product: coordinate '" + q.name() + "' occurs in both factors");
  auto join = [](const Chart &x, const Chart &y, const std::string &name) {
    std::optional<Symbol> f = x.fiber() ? x.fiber() : y.fiber();
    return Chart(name, concat(x.coords(), y.coords()), f);
  };
  std::string name = A.name() + " x " + B.name();
  const GroupoidMaps &ma = A.maps(), &mb = B.maps();
  GroupoidMaps m;
  m.source = concat(ma.source, mb.source);
  m.target = concat(ma.target, mb.target);
  m.unit = concat(ma.unit, mb.unit);
  m.inverse = concat(ma.inverse, mb.inverse);
  m.pr1 = concat(ma.pr1, mb.pr1);
  m.pr2 = concat(ma.pr2, mb.pr2);
  m.mult = concat(ma.mult, mb.mult);
  m.pair = concat(ma.pair, mb.pair);
  m.q1 = concat(ma.q1, mb.q1);
  m.q2 = concat(ma.q2, mb.q2);
  m.q3 = concat(ma.q3, mb.q3);
  return CoordGroupoid(name, join(A.arrows(), B.arrows(), name),
                       join(A.units(), B.units(), A.units().name() + " x " + B.units().name()),
                       join(A.pairs(), B.pairs(), "(" + name + ")^(2)"),
                       join(A.triples(), B.triples(), "(" + name + ")^(3)"), std::move(m));
}

CoordGroupoid tangent_groupoid(const CoordGroupoid &G) {
  const GroupoidMaps &g = G.maps();
  GroupoidMaps m;
  m.source = lift_images(g.source, G.arrows());
  m.target = lift_images(g.target, G.arrows());
  m.unit = lift_images(g.unit, G.units());
  m.inverse = lift_images(g.inverse, G.arrows());
  m.pr1 = lift_images(g.pr1, G.pairs());
  m.pr2 = lift_images(g.pr2, G.pairs());
  m.mult = lift_images(g.mult, G.pairs());
  // Velocities of the copies are the copies of the velocities.
  m.pair = lift_images(g.pair, G.copies());
  m.q1 = lift_images(g.q1, G.triples());
  m.q2 = lift_images(g.q2, G.triples());
  m.q3 = lift_images(g.q3, G.triples());
  return CoordGroupoid("T" + G.name(), tangent_chart(G.arrows()), tangent_chart(G.units()), tangent_chart(G.pairs()),
                       tangent_chart(G.triples()), std::move(m));
}

Certificate same_groupoid(const CoordGroupoid &A, const CoordGroupoid &B, const ZeroOptions &options) {
  for (auto [x, y] : {std::pair{&A.arrows(), &B.arrows()}, {&A.units(), &B.units()}, {&A.pairs(), &B.pairs()},
                      {&A.triples(), &B.triples()}})
    if (!x->same_coordinates(*y))
      return fail("same structure maps", "charts '" + x->name() + "' and '" + y->name() + "' differ");
  const GroupoidMaps &a = A.maps(), &b = B.maps();
  std::vector<std::pair<std::string, RationalFunction>> res;
  auto add = [&](const char *what, const Images &x, const Images &y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      res.emplace_back(std::string(what) + "[" + std::to_string(i) + "]", x[i] - y[i]);
  };
  add("source", a.source, b.source);
  add("target", a.target, b.target);
  add("unit", a.unit, b.unit);
  add("inverse", a.inverse, b.inverse);
  add("pr1", a.pr1, b.pr1);
  add("pr2", a.pr2, b.pr2);
  add("mult", a.mult, b.mult);
  add("pair", a.pair, b.pair);
  add("q1", a.q1, b.q1);
  add("q2", a.q2, b.q2);
  add("q3", a.q3, b.q3);
  return certify_all_zero("same structure maps", res, options);
}

// ---------------------------------------------------------------------------
// Cocycles, morphisms, actions

std::vector<Point> sample_points(const Chart &chart, int count, std::uint64_t seed) {
  RationalSampler rs(seed);
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point p;
    for (Symbol q : chart.coords())
      p.emplace(q, rs.next());
    out.push_back(std::move(p));
  }
  return out;
}

CocycleReport cocycle_check(const CoordGroupoid &G0, const RationalFunction &b, const ZeroOptions &options) {
  ZeroOptions z = at_least(options);
  CocycleReport rep;
  rep.b = b;
  rep.nonvanishing = certify_nonzero("b != 0", b, z);
  if (rep.nonvanishing.passed()) {
    for (const Point &p : sample_points(G0.arrows(), z.samples, z.seed ^ 0xb0b0ULL)) {
      auto v = eval(b, to_num(p), z.pole_radius);
      if (!v || v->is_zero(z.tolerance)) {
        rep.nonvanishing = fail("b != 0", "b vanishes or is undefined at " + describe_point(to_num(p)));
        break;
      }
    }
  }
  const GroupoidMaps &m = G0.maps();
  Images bb{b};
  RationalFunction lhs = compose(bb, G0.arrows(), m.pr1)[0] * compose(bb, G0.arrows(), m.pr2)[0];
  RationalFunction rhs = compose(bb, G0.arrows(), m.mult)[0];
  rep.multiplicative = certify_zero("b(g) b(h) = b(gh)", lhs - rhs, z);
  return rep;
}

bool MorphismReport::passed() const {
  return action.passed() && source.passed() && target.passed() && multiplication.passed();
}

MorphismReport rx_morphism_check(const CoordGroupoid &G, const RxAction &h, const ZeroOptions &options) {
  if (!h.chart().same_coordinates(G.arrows()))
    throw GroupoidError("action chart '" + h.chart().name() + "' is not the arrow chart of '" + G.name() + "'");
  ZeroOptions z = at_least(options);
  const GroupoidMaps &m = G.maps();
  const Chart &A = G.arrows();
  MorphismReport rep;
  rep.action = combine("h is an R^x-action", {h.identity_certificate(), h.group_law_certificate()});
  const Images &hs = h.images();
  rep.base_action = compose(m.source, A, compose(hs, A, m.unit));
  rep.source = map_equal("s(h_s g) = h_s(s(g))", compose(m.source, A, hs),
                         compose(rep.base_action, G.units(), m.source), G.units(), z);
  rep.target = map_equal("t(h_s g) = h_s(t(g))", compose(m.target, A, hs),
                         compose(rep.base_action, G.units(), m.target), G.units(), z);
  Images lhs = compose(hs, A, m.mult);
  Images rhs = compose(m.mult, G.pairs(), G.pair_of(compose(hs, A, m.pr1), compose(hs, A, m.pr2)));
  rep.multiplication = map_equal("h_s(gh) = h_s(g) h_s(h)", lhs, rhs, A, z);
  return rep;
}

bool ActionReport::passed() const {
  return anchor.passed() && composition.passed() && unit.passed() && equivariance.passed();
}

namespace {

// phi(y0, n) with y0 in arrow images and n in fiber images.
Images act(const GroupoidAction &A, const Images &y0, const Images &n) {
  return compose(A.action, Chart("", concat(A.base.arrows().coords(), A.fiber.coords())), concat(y0, n));
}

} // namespace

ActionReport action_check(const GroupoidAction &A, const ZeroOptions &options) {
  ZeroOptions z = at_least(options);
  const GroupoidMaps &m = A.base.maps();
  Images n = coords_of(A.fiber);
  ActionReport rep;
  rep.anchor = pass("p(y0.x) = tau(y0)", "the base component of y0.x is tau(y0) by construction");
  rep.composition = map_equal("y0.(y0'.x) = (y0 y0').x", act(A, m.pr1, act(A, m.pr2, n)), act(A, m.mult, n),
                              A.fiber, z);
  rep.unit = map_equal("1.x = x", act(A, m.unit, n), n, A.fiber, z);
  Images a = coords_of(A.base.arrows());
  rep.equivariance = map_equal("y0.(h_s x) = h_s(y0.x)", act(A, a, A.scaling.images()),
                               compose(A.scaling.images(), A.fiber, act(A, a, n)), A.fiber, z);
  return rep;
}

bool SplitGroupoid::passed() const {
  return action.passed() && (!cocycle || cocycle->passed()) && axioms.passed() && morphism.passed();
}

SplitGroupoid t_split(const GroupoidAction &A, const ZeroOptions &options) {
  const CoordGroupoid &G0 = A.base;
  if (!A.scaling.chart().same_coordinates(A.fiber))
    throw GroupoidError("the R^x-action must act on the fiber chart");
  check_size(A.action, A.fiber, "groupoid action");
  const GroupoidMaps &m0 = G0.maps();
  Images n = coords_of(A.fiber);
  std::optional<Symbol> fib = A.fiber.dim() == 1 ? std::optional<Symbol>(A.fiber[0]) : A.fiber.fiber();
  auto chart = [&](const Chart &c, const std::string &name) { return Chart(name, concat(c.coords(), A.fiber.coords()), fib); };
  std::string name = G0.name() + " x " + A.fiber.name();
  Chart arrows = chart(G0.arrows(), name);
  Chart units = chart(G0.units(), G0.units().name() + " x " + A.fiber.name());
  Chart pairs = chart(G0.pairs(), "(" + name + ")^(2)");
  Chart triples = chart(G0.triples(), "(" + name + ")^(3)");
  Images phi = A.action;

  GroupoidMaps m;
  m.source = concat(m0.source, n);
  m.target = concat(m0.target, phi);
  m.unit = concat(m0.unit, n);
  m.inverse = concat(m0.inverse, phi);
  m.pr2 = concat(m0.pr2, n);
  m.pr1 = concat(m0.pr1, act(A, m0.pr2, n));
  m.mult = concat(m0.mult, n);
  Images right;
  for (Symbol q : A.fiber.coords())
    right.push_back(sym(right_copy(q)));
  m.pair = concat(m0.pair, right);
  m.q3 = concat(m0.q3, n);
  m.q2 = concat(m0.q2, act(A, m0.q3, n));
  m.q1 = concat(m0.q1, act(A, m0.q2, act(A, m0.q3, n)));

  SplitGroupoid out;
  out.groupoid = CoordGroupoid(name, arrows, units, pairs, triples, std::move(m));
  out.reduced = G0;
  out.fiber = A.fiber;
  Symbol s = A.scaling.parameter();
  out.arrows_action = RxAction(arrows, s, concat(coords_of(G0.arrows()), A.scaling.images()), options);
  out.units_action = RxAction(units, s, concat(coords_of(G0.units()), A.scaling.images()), options);
  out.action = action_check(A, options);
  out.axioms = verify_groupoid(out.groupoid, options);
  out.morphism = rx_morphism_check(out.groupoid, out.arrows_action, options);
  return out;
}

SplitGroupoid trivial_split(const CoordGroupoid &G0, const RationalFunction &b, std::string_view fiber,
                            std::string_view parameter, const ZeroOptions &options) {
  Symbol g = coordinate(fiber);
  Chart N("R^x", {g}, g);
  GroupoidAction A{G0, N, {b * sym(g)}, RxAction::fiber_scaling(N, klab::parameter(parameter))};
  SplitGroupoid out = t_split(A, options);
  out.cocycle = cocycle_check(G0, b, options);
  return out;
}

// ---------------------------------------------------------------------------
// Splitting map

bool SplittingReport::passed() const {
  return freeness.passed() && invariance.passed() && fibered.passed() && left_inverse.passed() &&
         right_inverse.passed();
}

namespace {

bool nowhere_zero(const RationalFunction &r, const Chart &chart) {
  if (r.is_zero() || !r.num().is_monomial() || !r.den().is_monomial())
    return false;
  for (Symbol s : free_symbols(r))
    if (!chart.fiber() || s != *chart.fiber())
      return false;
  return true;
}

} // namespace

SplittingReport splitting_map_check(const SplitGroupoid &G, std::optional<Images> pi, std::optional<Images> inverse,
                                    const ZeroOptions &options) {
  ZeroOptions z = at_least(options);
  const CoordGroupoid &g = G.groupoid;
  const CoordGroupoid &g0 = G.reduced;
  const Chart &A = g.arrows();
  std::size_t k0 = static_cast<std::size_t>(g0.arrows().dim());
  std::size_t u0 = static_cast<std::size_t>(g0.units().dim());
  std::size_t nf = static_cast<std::size_t>(G.fiber.dim());
  Images a = coords_of(A);
  Images p = pi ? *pi : slice(a, 0, k0);
  check_size(p, g0.arrows(), "quotient projection");
  Chart F("G0 x_M0 M", concat(g0.arrows().coords(), G.fiber.coords()));
  Images inv = inverse ? *inverse : coords_of(F);
  check_size(inv, A, "candidate inverse");
  const Images &src = g.maps().source;

  SplittingReport rep;
  rep.images = concat(p, slice(src, u0, nf));

  // Freeness: some Euler component never vanishes, else look for a fixed point.
  const RxAction &h = G.arrows_action;
  Images euler(static_cast<std::size_t>(A.dim()));
  for (const auto &[I, c] : h.euler().components())
    euler[static_cast<std::size_t>(I[0])] = c;
  bool free = std::any_of(euler.begin(), euler.end(), [&](const RationalFunction &c) { return nowhere_zero(c, A); });
  if (free) {
    rep.freeness = pass("R^x acts freely", "the Euler field has a nowhere-vanishing component");
  } else {
    std::optional<NumPoint> witness;
    mpq_class s_val(3, 2);
    for (const Point &pt : sample_points(A, 4, z.seed ^ 0xf1eeULL)) {
      for (int i = 0; i < A.dim() && !witness; ++i) {
        NumPoint q = to_num(pt);
        q[A[i]] = Num::of(0);
        auto e = eval_all(euler, q, z.pole_radius);
        if (!e || !std::all_of(e->begin(), e->end(), [&](const Num &v) { return v.is_zero(z.tolerance); }))
          continue;
        auto moved = eval_all(h.images_at(RationalFunction(s_val)), q, z.pole_radius);
        if (!moved)
          continue;
        bool fixed = true;
        for (int j = 0; j < A.dim(); ++j)
          fixed = fixed && ((*moved)[static_cast<std::size_t>(j)] - q[A[j]]).is_zero(z.tolerance);
        if (fixed)
          witness = q;
      }
      if (witness)
        break;
    }
    if (witness) {
      rep.freeness = fail("R^x acts freely", "fixed point of h_s at " + describe_point(*witness));
      for (const auto &[s, v] : *witness)
        rep.fixed_point.emplace_back(s.name(), v.text());
    } else {
      rep.freeness = fail("R^x acts freely", "no nowhere-vanishing component of the Euler field");
    }
  }
  rep.invariance = map_equal("pi(h_s y) = pi(y)", compose(p, A, h.images()), p, g0.arrows(), z);
  rep.fibered = map_equal("sigma0(pi(y)) = base part of s(y)", compose(g0.maps().source, g0.arrows(), p),
                          slice(src, 0, u0), g0.units(), z);
  rep.left_inverse = map_equal("S^-1(S(y)) = y", compose(inv, F, rep.images), a, A, z);
  rep.right_inverse = map_equal("S(S^-1(f)) = f", compose(rep.images, A, inv), coords_of(F), F, z);
  return rep;
}

// ---------------------------------------------------------------------------
// Cotangent groupoids

CotangentGroupoid cotangent_groupoid_pair(int n, std::string_view parameter) {
  CoordGroupoid base = pair_groupoid(n);
  std::vector<Symbol> x, y, z, w, u;
  for (int i = 0; i < n; ++i) {
    x.push_back(base.arrows()[i]);
    y.push_back(base.arrows()[n + i]);
    z.push_back(base.pairs()[2 * n + i]);
    w.push_back(base.triples()[3 * n + i]);
    u.push_back(base.units()[i]);
  }
  auto rf = [](const std::vector<Symbol> &v, Symbol (*f)(Symbol) = nullptr, int sign = 1) {
    Images out;
    for (Symbol s : v)
      out.push_back(RationalFunction(static_cast<long>(sign)) * sym(f ? f(s) : s));
    return out;
  };
  auto P = &momentum_of;
  auto PL = [](Symbol s) { return left_copy(momentum_of(s)); };
  auto PR = [](Symbol s) { return right_copy(momentum_of(s)); };
  auto L = &left_copy;
  auto R = &right_copy;
  auto rf2 = [](const std::vector<Symbol> &v, auto f) {
    Images out;
    for (Symbol s : v)
      out.push_back(sym(f(s)));
    return out;
  };

  GroupoidMaps m;
  m.source = concat(rf(y), rf(y, P, -1));
  m.target = concat(rf(x), rf(x, P));
  m.unit = concat(concat(rf(u), rf(u)), concat(rf(u, P), rf(u, P, -1)));
  m.inverse = concat(concat(rf(y), rf(x)), concat(rf(y, P, -1), rf(x, P, -1)));
  m.pr1 = concat(concat(rf(x), rf(y)), concat(rf(x, P), rf(y, P)));
  m.pr2 = concat(concat(rf(y), rf(z)), concat(rf(y, P, -1), rf(z, P)));
  m.mult = concat(concat(rf(x), rf(z)), concat(rf(x, P), rf(z, P)));
  // Second arrow (y, z, -eta, eta') is addressed by its copies (x__R, y__R, ...).
  m.pair = concat(concat(rf2(x, L), concat(rf2(y, L), rf2(y, R))), concat(rf2(x, PL), concat(rf2(y, PL), rf2(y, PR))));
  m.q1 = m.pr1;
  m.q2 = m.pr2;
  m.q3 = concat(concat(rf(z), rf(w)), concat(rf(z, P, -1), rf(w, P)));

  CotangentGroupoid out;
  out.base = base;
  out.groupoid = CoordGroupoid("T*" + base.name(), cotangent_chart(base.arrows()), cotangent_chart(base.units()),
                               cotangent_chart(base.pairs()), cotangent_chart(base.triples()), std::move(m));
  out.omega = canonical_symplectic_form(base.arrows());
  Images scale = coords_of(base.arrows());
  RationalFunction s = sym(klab::parameter(parameter));
  for (Symbol q : base.arrows().coords())
    scale.push_back(s * sym(momentum_of(q)));
  out.scaling = RxAction(out.groupoid.arrows(), klab::parameter(parameter), scale);
  for (int i = 0; i < n; ++i)
    out.unit_momenta.push_back(n + i);
  return out;
}

CotangentGroupoid cotangent_group(const CoordGroupoid &group, std::string_view parameter) {
  if (group.units().dim() != 0)
    throw GroupoidError("cotangent_group needs a group (a groupoid over a point)");
  const Chart &A = group.arrows();
  const GroupoidMaps &g = group.maps();
  int k = A.dim();
  Images M = compose(g.mult, group.pairs(), g.pair);
  Matrix D1(static_cast<std::size_t>(k), Images(static_cast<std::size_t>(k)));
  Matrix D2 = D1;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      D1[i][j] = derivative(M[i], left_copy(A[j]));
      D2[i][j] = derivative(M[i], right_copy(A[j]));
    }
  auto at = [&](const Matrix &D, const Images &l, const Images &r) {
    std::map<Symbol, RationalFunction> b;
    for (int j = 0; j < k; ++j) {
      b.emplace(left_copy(A[j]), l[j]);
      b.emplace(right_copy(A[j]), r[j]);
    }
    Matrix out = D;
    for (auto &row : out)
      row = substitute_all(row, b);
    return out;
  };
  // Row vector rho times matrix D.
  auto times = [&](const Images &rho, const Matrix &D) {
    Images out(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < k; ++i)
        out[j] = out[j] + rho[i] * D[i][j];
    return out;
  };
  auto inverse_of = [&](const Matrix &D) {
    auto inv = invert(D);
    if (!inv)
      throw GroupoidError("group multiplication has a singular partial derivative");
    return *inv;
  };
  // Momentum of the second factor: rho D1(a,b)^-1 D2(a,b).
  auto carry = [&](const Images &rho, const Images &a, const Images &b) {
    return times(times(rho, inverse_of(at(D1, a, b))), at(D2, a, b));
  };
  Images e = g.unit;
  Images p;
  std::vector<Symbol> mu;
  for (Symbol q : A.coords()) {
    p.push_back(sym(momentum_of(q)));
    mu.push_back(coordinate(momentum_of(q).name() + "__e"));
  }
  Images a = coords_of(A);
  Images mus;
  for (Symbol s : mu)
    mus.push_back(sym(s));

  GroupoidMaps m;
  m.source = times(p, at(D2, a, e));
  m.target = times(p, at(D1, e, a));
  m.unit = concat(e, mus);
  m.inverse = concat(g.inverse, carry(p, a, g.inverse));
  m.pr1 = concat(g.pr1, p);
  m.pr2 = concat(g.pr2, carry(p, g.pr1, g.pr2));
  m.mult = concat(g.mult, times(p, inverse_of(at(D1, g.pr1, g.pr2))));
  Images pl;
  for (Symbol q : A.coords())
    pl.push_back(sym(left_copy(momentum_of(q))));
  m.pair = concat(g.pair, pl);
  Images p2 = carry(p, g.q1, g.q2);
  m.q1 = concat(g.q1, p);
  m.q2 = concat(g.q2, p2);
  m.q3 = concat(g.q3, carry(p2, g.q2, g.q3));

  std::vector<Symbol> pc;
  for (Symbol q : A.coords())
    pc.push_back(momentum_of(q));
  CotangentGroupoid out;
  out.base = group;
  out.groupoid = CoordGroupoid("T*" + group.name(), cotangent_chart(A), Chart("g*", mu),
                               Chart("T*" + group.name() + "^(2)", concat(group.pairs().coords(), pc)),
                               Chart("T*" + group.name() + "^(3)", concat(group.triples().coords(), pc)), std::move(m));
  out.omega = canonical_symplectic_form(A);
  Images scale = a;
  RationalFunction s = sym(klab::parameter(parameter));
  for (const auto &x : p)
    scale.push_back(s * x);
  out.scaling = RxAction(out.groupoid.arrows(), klab::parameter(parameter), scale);
  for (int i = 0; i < k; ++i)
    out.unit_momenta.push_back(i);
  return out;
}

CotangentGroupoid product(const CotangentGroupoid &A, const CotangentGroupoid &B, std::string_view parameter) {
  CotangentGroupoid out;
  out.groupoid = product(A.groupoid, B.groupoid);
  out.base = product(A.base, B.base);
  const Chart &arrows = out.groupoid.arrows();
  out.omega = embed_form(A.omega, arrows) + embed_form(B.omega, arrows);
  Symbol s = klab::parameter(parameter);
  std::map<Symbol, RationalFunction> to_s{{A.scaling.parameter(), sym(s)}};
  Images scale = substitute_all(A.scaling.images(), to_s);
  to_s = {{B.scaling.parameter(), sym(s)}};
  scale = concat(scale, substitute_all(B.scaling.images(), to_s));
  out.scaling = RxAction(arrows, s, scale);
  out.unit_momenta = A.unit_momenta;
  for (int i : B.unit_momenta)
    out.unit_momenta.push_back(A.groupoid.units().dim() + i);
  return out;
}

// ---------------------------------------------------------------------------
// Sampled multiplicativity checks

namespace {

SampleReport finish(std::string name, int samples, bool exact, double worst, const std::string &witness,
                    const ZeroOptions &z, int wanted) {
  SampleReport rep;
  rep.samples = samples;
  rep.exact = exact;
  rep.max_residual = worst;
  std::ostringstream os;
  os.precision(3);
  os << samples << " samples, max residual " << worst << (exact ? " (exact)" : "");
  if (samples < wanted)
    rep.certificate = fail(std::move(name), "sampler failure: only " + std::to_string(samples) + " of " +
                                                std::to_string(wanted) + " samples were usable");
  else if (!witness.empty())
    rep.certificate = fail(std::move(name), os.str() + "; witness " + witness);
  else
    rep.certificate = Certificate{std::move(name), Verdict::numeric_pass, os.str(), {}};
  (void)z;
  return rep;
}

} // namespace

SampleReport pairing_multiplicativity_check(const CotangentGroupoid &cot, const CoordGroupoid &tangent, int samples,
                                            const ZeroOptions &options) {
  const CoordGroupoid &C = cot.groupoid;
  const CoordGroupoid &B = cot.base;
  if (!tangent.arrows().same_coordinates(tangent_chart(B.arrows())))
    throw GroupoidError("tangent groupoid is not built over the same base groupoid");
  RationalSampler rs(options.seed ^ 0x9a1eULL);
  std::size_t kb = static_cast<std::size_t>(B.arrows().dim());
  int done = 0, attempts = 0;
  bool exact = true;
  double worst = 0;
  std::string witness;
  while (done < samples && attempts < 4 * samples + 8) {
    ++attempts;
    NumPoint c = bind_point(C.pairs(), random_vector(rs, C.pairs().dim()));
    auto g = eval_all(C.maps().pr1, c, options.pole_radius);
    auto h = eval_all(C.maps().pr2, c, options.pole_radius);
    auto gh = eval_all(C.maps().mult, c, options.pole_radius);
    if (!g || !h || !gh)
      continue;
    // Base points of the two covectors and the pair they form in the base groupoid.
    NumPoint copies;
    for (std::size_t i = 0; i < kb; ++i) {
      copies.emplace(left_copy(B.arrows()[static_cast<int>(i)]), (*g)[i]);
      copies.emplace(right_copy(B.arrows()[static_cast<int>(i)]), (*h)[i]);
    }
    auto base_pair = eval_all(B.maps().pair, copies, options.pole_radius);
    if (!base_pair)
      continue;
    std::vector<Num> tp = *base_pair;
    auto vel = random_vector(rs, B.pairs().dim());
    tp.insert(tp.end(), vel.begin(), vel.end());
    NumPoint t2 = bind_point(tangent.pairs(), tp);
    auto X = eval_all(tangent.maps().pr1, t2, options.pole_radius);
    auto Y = eval_all(tangent.maps().pr2, t2, options.pole_radius);
    auto XY = eval_all(tangent.maps().mult, t2, options.pole_radius);
    if (!X || !Y || !XY)
      continue;
    ++done;
    auto pairing = [&](const std::vector<Num> &cv, const std::vector<Num> &tv) {
      Num acc = Num::of(0);
      for (std::size_t i = 0; i < kb; ++i)
        acc = acc + cv[kb + i] * tv[kb + i];
      return acc;
    };
    Num res = pairing(*gh, *XY) - pairing(*g, *X) - pairing(*h, *Y);
    // Covectors and vectors must sit over the same arrows.
    for (std::size_t i = 0; i < kb; ++i)
      for (const Num &d : {(*g)[i] - (*X)[i], (*h)[i] - (*Y)[i], (*gh)[i] - (*XY)[i]})
        if (!d.is_zero(options.tolerance))
          res = res + Num::approx(d.magnitude());
    exact = exact && res.exact;
    worst = std::max(worst, res.magnitude());
    if (!res.is_zero(options.tolerance) && witness.empty())
      witness = describe_point(c) + " (residual " + res.text() + ")";
  }
  return finish("<th*th', X.X'> = <th, X> + <th', X'>", done, exact, worst, witness, options, samples);
}

SampleReport multiplicative_form_check(const CoordGroupoid &G, const DifferentialForm &omega, int samples,
                                       const ZeroOptions &options) {
  if (omega.degree() != 2 || !omega.chart().same_coordinates(G.arrows()))
    throw GroupoidError("multiplicative form check needs a 2-form on the arrow chart");
  RationalSampler rs(options.seed ^ 0x3f0aULL);
  int done = 0, attempts = 0;
  bool exact = true;
  double worst = 0;
  std::string witness;
  while (done < samples && attempts < 4 * samples + 8) {
    ++attempts;
    NumPoint c = bind_point(G.pairs(), random_vector(rs, G.pairs().dim()));
    auto U = random_vector(rs, G.pairs().dim());
    auto V = random_vector(rs, G.pairs().dim());
    auto value = [&](const CoordMap &f) -> std::optional<Num> {
      auto at = eval_all(f.images(), c, options.pole_radius);
      auto u = push_vector(f, c, U, options.pole_radius);
      auto v = push_vector(f, c, V, options.pole_radius);
      if (!at || !u || !v)
        return std::nullopt;
      NumPoint p = bind_point(G.arrows(), *at);
      Num acc = Num::of(0);
      for (const auto &[I, w] : omega.components()) {
        auto wv = eval(w, p, options.pole_radius);
        if (!wv)
          return std::nullopt;
        std::size_t a = static_cast<std::size_t>(I[0]), b = static_cast<std::size_t>(I[1]);
        acc = acc + *wv * ((*u)[a] * (*v)[b] - (*u)[b] * (*v)[a]);
      }
      return acc;
    };
    auto wm = value(G.mult()), w1 = value(G.pr1()), w2 = value(G.pr2());
    if (!wm || !w1 || !w2)
      continue;
    ++done;
    Num res = *wm - *w1 - *w2;
    exact = exact && res.exact;
    worst = std::max(worst, res.magnitude());
    if (!res.is_zero(options.tolerance) && witness.empty())
      witness = describe_point(c) + " (residual " + res.text() + ")";
  }
  return finish("w(U.U', V.V') = w(U, V) + w(U', V')", done, exact, worst, witness, options, samples);
}

// ---------------------------------------------------------------------------
// C(G)

namespace {

bool nonzero_momentum(const CotangentGroupoid &cot, const Images &map, const NumPoint &p, double pole_radius,
                      double tol) {
  for (int i : cot.unit_momenta) {
    auto v = eval(map[static_cast<std::size_t>(i)], p, pole_radius);
    if (v && !v->is_zero(tol))
      return true;
  }
  return false;
}

bool member(const CotangentGroupoid &cot, const NumPoint &p, const ZeroOptions &z) {
  const GroupoidMaps &m = cot.groupoid.maps();
  return nonzero_momentum(cot, m.source, p, z.pole_radius, z.tolerance) &&
         nonzero_momentum(cot, m.target, p, z.pole_radius, z.tolerance);
}

} // namespace

bool canonical_contact_membership(const CotangentGroupoid &cot, const Point &arrow) {
  for (Symbol q : cot.groupoid.arrows().coords())
    if (!arrow.count(q))
      throw GroupoidError("point has no value for '" + q.name() + "'");
  return member(cot, to_num(arrow), ZeroOptions{});
}

ClosureReport closure_check(const CotangentGroupoid &cot, int samples, const ZeroOptions &options) {
  const CoordGroupoid &C = cot.groupoid;
  RationalSampler rs(options.seed ^ 0xc105ULL);
  ClosureReport rep;
  std::string violation;
  int attempts = 0;
  while (rep.products < samples && attempts < 8 * samples + 8) {
    ++attempts;
    NumPoint c = bind_point(C.pairs(), random_vector(rs, C.pairs().dim()));
    auto g = eval_all(C.maps().pr1, c, options.pole_radius);
    auto h = eval_all(C.maps().pr2, c, options.pole_radius);
    auto gh = eval_all(C.maps().mult, c, options.pole_radius);
    if (!g || !h || !gh)
      continue;
    NumPoint pg = bind_point(C.arrows(), *g), ph = bind_point(C.arrows(), *h);
    if (!member(cot, pg, options) || !member(cot, ph, options))
      continue;
    ++rep.products;
    if (!member(cot, bind_point(C.arrows(), *gh), options) && violation.empty())
      violation = "product leaves C(G) at " + describe_point(c);
    auto gi = eval_all(C.maps().inverse, pg, options.pole_radius);
    if (gi) {
      ++rep.inverses;
      if (!member(cot, bind_point(C.arrows(), *gi), options) && violation.empty())
        violation = "inverse leaves C(G) at " + describe_point(pg);
    }
    mpq_class s = rs.next();
    auto scaled = eval_all(cot.scaling.images_at(RationalFunction(s)), pg, options.pole_radius);
    if (scaled) {
      ++rep.scalings;
      if (!member(cot, bind_point(C.arrows(), *scaled), options) && violation.empty())
        violation = "scaling by " + s.get_str() + " leaves C(G) at " + describe_point(pg);
    }
  }
  std::string detail = std::to_string(rep.products) + " products, " + std::to_string(rep.inverses) + " inverses, " +
                       std::to_string(rep.scalings) + " scalings";
  if (rep.products < samples)
    rep.certificate = fail("C(G) is closed", "sampler failure: " + detail);
  else if (!violation.empty())
    rep.certificate = fail("C(G) is closed", violation);
  else
    rep.certificate = Certificate{"C(G) is closed", Verdict::numeric_pass, detail, {}};
  return rep;
}

// ---------------------------------------------------------------------------
// Realisation pipeline

bool DazordReport::passed() const {
  return split.passed() && symplectic.certified() && multiplicative.certificate.passed() && psi.embedded() &&
         membership.passed() && morphism.passed();
}

DazordReport dazord_pipeline(int samples, const ZeroOptions &options) {
  ZeroOptions z = at_least(options);
  CoordGroupoid pair = pair_groupoid(1);
  CoordGroupoid group = multiplicative_group("r");
  CoordGroupoid G0 = product(pair, group);
  Symbol r = coordinate("r");
  DazordReport rep;
  rep.split = trivial_split(G0, RationalFunction(1L) / sym(r), "g", "s", z);
  const CoordGroupoid &G = rep.split.groupoid;

  // (x, y, r, g) -> (x, y, xi = g/r, eta = -g) in T*Pair(R).
  CotangentGroupoid cot_pair = cotangent_groupoid_pair(1);
  Symbol g = coordinate("g");
  Images to_cot{sym(coordinate("x")), sym(coordinate("y")), sym(g) / sym(r), -sym(g)};
  CoordMap into(G.arrows(), cot_pair.groupoid.arrows(), to_cot);
  DifferentialForm omega = pullback(into, cot_pair.omega);
  rep.symplectic = homogeneous_symplectic(omega, rep.split.arrows_action, z);
  rep.multiplicative = multiplicative_form_check(G, omega, samples, z);
  rep.psi = psi_embedding(rep.symplectic, z);

  CotangentGroupoid cot = product(cot_pair, cotangent_group(group));
  const Chart &psi_target = rep.psi.psi->target();
  const Images &psi = rep.psi.psi->images();
  int members = 0;
  std::string outside;
  for (const Point &p : sample_points(G.arrows(), samples, z.seed ^ 0xda20ULL)) {
    auto img = eval_all(reorder(psi, psi_target, cot.groupoid.arrows()), to_num(p), z.pole_radius);
    if (img && member(cot, bind_point(cot.groupoid.arrows(), *img), z))
      ++members;
    else if (outside.empty())
      outside = describe_point(to_num(p));
  }
  rep.membership = outside.empty()
                       ? Certificate{"Psi(G) lies in C(G0)", Verdict::numeric_pass,
                                     std::to_string(members) + " sampled images are members", {}}
                       : fail("Psi(G) lies in C(G0)", "image outside C(G0) from " + outside);

  auto psi_of = [&](const Images &arrow) {
    return reorder(compose(psi, G.arrows(), arrow), psi_target, cot.groupoid.arrows());
  };
  const GroupoidMaps &m = G.maps();
  const GroupoidMaps &mc = cot.groupoid.maps();
  const Chart &CA = cot.groupoid.arrows();
  Images a = psi_of(m.pr1), b = psi_of(m.pr2);
  Certificate composable = map_equal("Psi(g), Psi(h) composable", compose(mc.source, CA, a),
                                     compose(mc.target, CA, b), cot.groupoid.units(), z);
  Certificate hom = map_equal("Psi(gh) = Psi(g) Psi(h)", psi_of(m.mult),
                              compose(mc.mult, cot.groupoid.pairs(), cot.groupoid.pair_of(a, b)), CA, z);
  rep.morphism = combine("Psi is a groupoid morphism", {composable, hom});
  return rep;
}

} // namespace klab
