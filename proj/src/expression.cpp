#include "klab/expression.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace klab {

struct Expression::Node {
  NodeKind kind = NodeKind::number;
  mpq_class value;
  Symbol sym;
  MultiIndex deriv;
  ElementaryFn fn{};
  int exponent = 0;
  std::vector<Expression> kids;
  RationalFunction nf;
};

namespace {

using NodePtr = std::shared_ptr<Expression::Node>;

RationalFunction generator_rf(GenId g) { return RationalFunction(Polynomial::generator(g)); }

RationalFunction elementary_nf(ElementaryFn fn, const RationalFunction &arg) {
  if (arg.is_constant()) {
    mpq_class c = arg.constant_value();
    if (c == 0) {
      switch (fn) {
      case ElementaryFn::sin: return {};
      case ElementaryFn::cos:
      case ElementaryFn::exp: return RationalFunction(1L);
      case ElementaryFn::log: throw ExpressionError("log(0) is undefined");
      }
    }
    if (fn == ElementaryFn::log && c == 1)
      return {};
    if (fn == ElementaryFn::log && c < 0)
      throw ExpressionError("log of a negative constant");
  }
  return generator_rf(generators::elementary(fn, arg));
}

std::vector<Symbol> deps_of(const RationalFunction &r) {
  std::vector<Symbol> out;
  for (GenId g : r.generators()) {
    const auto &d = generators::info(g).depends_on;
    out.insert(out.end(), d.begin(), d.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool gen_depends_on(GenId g, Symbol v) {
  const auto &d = generators::info(g).depends_on;
  return std::binary_search(d.begin(), d.end(), v);
}

} // namespace

// ---------------------------------------------------------------------------
// Construction

Expression::Expression() {
  static const std::shared_ptr<const Node> zero = std::make_shared<Node>();
  node_ = zero;
}

Expression::Expression(int value) : Expression(mpq_class(value)) {}
Expression::Expression(long value) : Expression(mpq_class(value)) {}

Expression::Expression(const mpq_class &value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::number;
  n->value = value;
  n->value.canonicalize();
  n->nf = RationalFunction(n->value);
  node_ = std::move(n);
}

Expression::Expression(Symbol s) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::symbol;
  n->sym = s;
  n->nf = generator_rf(generators::of_symbol(s));
  node_ = std::move(n);
}

Expression Expression::number(const mpq_class &value) { return Expression(value); }

Expression Expression::apply(Symbol f, std::vector<Expression> args, MultiIndex derivative) {
  if (!f.is_function())
    throw ExpressionError("'" + f.name() + "' is not a function symbol");
  if (static_cast<int>(args.size()) != f.arity())
    throw ExpressionError("function '" + f.name() + "' expects " + std::to_string(f.arity()) + " argument(s), got " +
                          std::to_string(args.size()));
  if (derivative.empty())
    derivative.assign(args.size(), 0);
  if (derivative.size() != args.size())
    throw ExpressionError("derivative multi-index has the wrong length for '" + f.name() + "'");
  for (int k : derivative)
    if (k < 0)
      throw ExpressionError("negative derivative order");
  std::vector<RationalFunction> nfs;
  nfs.reserve(args.size());
  for (const auto &a : args)
    nfs.push_back(a.normal_form());
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::apply;
  n->sym = f;
  n->deriv = derivative;
  n->kids = std::move(args);
  n->nf = generator_rf(generators::formal(f, std::move(derivative), std::move(nfs)));
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::elementary(ElementaryFn fn, Expression arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::elementary;
  n->fn = fn;
  n->nf = elementary_nf(fn, arg.normal_form());
  n->kids.push_back(std::move(arg));
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::sum(std::vector<Expression> terms) {
  if (terms.empty())
    return Expression();
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::sum;
  RationalFunction acc;
  for (const auto &t : terms)
    acc = acc + t.normal_form();
  n->nf = std::move(acc);
  n->kids = std::move(terms);
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::product(std::vector<Expression> factors) {
  if (factors.empty())
    return Expression(1);
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::product;
  RationalFunction acc(1L);
  for (const auto &f : factors)
    acc = acc * f.normal_form();
  n->nf = std::move(acc);
  n->kids = std::move(factors);
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

Expression Expression::power(Expression base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::power;
  n->exponent = exponent;
  try {
    n->nf = base.normal_form().pow(exponent);
  } catch (const std::domain_error &) {
    throw ExpressionError("division by zero");
  }
  n->kids.push_back(std::move(base));
  return Expression(std::shared_ptr<const Node>(std::move(n)));
}

// ---------------------------------------------------------------------------
// Canonical trees

namespace {

Expression make_node(NodeKind kind, std::vector<Expression> kids, RationalFunction nf, int exponent = 0);

struct GenNodeCache {
  std::shared_mutex mutex;
  std::unordered_map<GenId, Expression> nodes;
};

GenNodeCache &gen_node_cache() {
  static GenNodeCache c;
  return c;
}

Expression gen_node(GenId g);

Expression poly_tree(const Polynomial &p);

Expression term_node(const mpq_class &coeff, const Monomial &mono, std::vector<Expression> extra = {}) {
  if (mono.empty() && extra.empty())
    return Expression(coeff);
  Monomial sorted = mono;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto &a, const auto &b) { return generators::compare(a.first, b.first) < 0; });
  std::vector<Expression> factors;
  if (coeff != 1)
    factors.emplace_back(coeff);
  for (const auto &[g, e] : sorted) {
    Expression base = gen_node(g);
    if (e == 1)
      factors.push_back(base);
    else
      factors.push_back(make_node(NodeKind::power, {base}, generator_rf(g).pow(e), e));
  }
  RationalFunction nf(Polynomial::from_terms({Term{mono, coeff}}));
  for (auto &x : extra) {
    nf = nf * x.normal_form();
    factors.push_back(std::move(x));
  }
  if (factors.size() == 1)
    return factors.front();
  return make_node(NodeKind::product, std::move(factors), std::move(nf));
}

std::vector<const Term *> terms_by_name(const Polynomial &p) {
  std::vector<const Term *> ts;
  for (const auto &t : p.terms())
    ts.push_back(&t);
  std::stable_sort(ts.begin(), ts.end(),
                   [](const Term *a, const Term *b) { return generators::compare(a->mono, b->mono) > 0; });
  return ts;
}

Expression poly_tree(const Polynomial &p) {
  if (p.is_zero())
    return Expression();
  if (p.is_monomial())
    return term_node(p.leading_term().coeff, p.leading_term().mono);
  std::vector<Expression> kids;
  for (const Term *t : terms_by_name(p))
    kids.push_back(term_node(t->coeff, t->mono));
  return make_node(NodeKind::sum, std::move(kids), RationalFunction(p));
}

Expression gen_node(GenId g) {
  auto &cache = gen_node_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.nodes.find(g); it != cache.nodes.end())
      return it->second;
  }
  const GeneratorInfo &gi = generators::info(g);
  Expression out;
  switch (gi.kind) {
  case GenKind::symbol: out = Expression(gi.symbol); break;
  case GenKind::formal: {
    std::vector<Expression> args;
    for (const auto &a : gi.args)
      args.push_back(Expression::from_normal_form(a));
    out = Expression::apply(gi.symbol, std::move(args), gi.derivative);
    break;
  }
  case GenKind::elementary:
    out = Expression::elementary(gi.fn, Expression::from_normal_form(gi.args.front()));
    break;
  }
  std::unique_lock lock(cache.mutex);
  return cache.nodes.emplace(g, out).first->second;
}

} // namespace

struct NodeFactory {
  static Expression make(NodeKind kind, std::vector<Expression> kids, RationalFunction nf, int exponent) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->kids = std::move(kids);
    n->nf = std::move(nf);
    n->exponent = exponent;
    return wrap(std::move(n));
  }
  static Expression wrap(std::shared_ptr<const Expression::Node> n);
};

namespace {
Expression make_node(NodeKind kind, std::vector<Expression> kids, RationalFunction nf, int exponent) {
  return NodeFactory::make(kind, std::move(kids), std::move(nf), exponent);
}
} // namespace

Expression Expression::from_normal_form(const RationalFunction &nf) {
  if (nf.is_polynomial())
    return poly_tree(nf.num());
  Expression den = poly_tree(nf.den());
  Expression inv = make_node(NodeKind::power, {den}, RationalFunction(Polynomial(1L), nf.den()), -1);
  const Polynomial &num = nf.num();
  if (num.is_monomial()) {
    const Term &t = num.leading_term();
    if (t.mono.empty() && t.coeff == 1)
      return inv;
    return term_node(t.coeff, t.mono, {inv});
  }
  return make_node(NodeKind::product, {poly_tree(num), inv}, nf);
}

// ---------------------------------------------------------------------------
// Accessors

NodeKind Expression::kind() const { return node_->kind; }
const mpq_class &Expression::value() const { return node_->value; }
Symbol Expression::symbol() const { return node_->sym; }
const MultiIndex &Expression::derivative() const { return node_->deriv; }
ElementaryFn Expression::function() const { return node_->fn; }
int Expression::exponent() const { return node_->exponent; }
const std::vector<Expression> &Expression::children() const { return node_->kids; }
const RationalFunction &Expression::normal_form() const { return node_->nf; }
bool Expression::is_literal_zero() const { return node_->kind == NodeKind::number && node_->value == 0; }
bool Expression::is_rational() const { return klab::is_rational(node_->nf); }

Expression NodeFactory::wrap(std::shared_ptr<const Expression::Node> n) { return Expression(std::move(n)); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string print(const Expression &e);

bool is_atomic_text(const Expression &e) {
  switch (e.kind()) {
  case NodeKind::symbol:
  case NodeKind::apply:
  case NodeKind::elementary: return true;
  case NodeKind::number: return e.value() >= 0 && e.value().get_den() == 1;
  default: return false;
  }
}

std::string as_factor(const Expression &e) {
  if (e.kind() == NodeKind::power && e.exponent() > 0)
    return print(e);
  if (is_atomic_text(e))
    return print(e);
  if (e.kind() == NodeKind::product) {
    std::string s = print(e);
    if (s.front() != '-' && s.find('/') == std::string::npos)
      return s;
    return "(" + s + ")";
  }
  return "(" + print(e) + ")";
}

std::string power_text(const Expression &base, int exponent) {
  std::string b = is_atomic_text(base) ? print(base) : "(" + print(base) + ")";
  if (exponent == 1)
    return b;
  return b + "^" + std::to_string(exponent);
}

std::string reciprocal_text(const Expression &base, int exponent) {
  return exponent == 1 ? as_factor(base) : power_text(base, exponent);
}

std::string divisor_text(const std::string &s) {
  if (s.find_first_of("*/ ") == std::string::npos || s.front() == '(')
    return s;
  return "(" + s + ")";
}

std::string join(const std::vector<std::string> &parts, const char *sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += sep;
    out += parts[i];
  }
  return out;
}

std::string print_product(const Expression &e) {
  const auto &kids = e.children();
  std::size_t start = 0;
  mpq_class coeff = 1;
  if (!kids.empty() && kids.front().kind() == NodeKind::number) {
    coeff = kids.front().value();
    start = 1;
  }
  std::vector<std::string> num, den;
  for (std::size_t i = start; i < kids.size(); ++i) {
    const Expression &k = kids[i];
    if (k.kind() == NodeKind::power && k.exponent() < 0)
      den.push_back(reciprocal_text(k.children().front(), -k.exponent()));
    else
      num.push_back(as_factor(k));
  }
  if (num.empty() && den.empty())
    return coeff.get_str();
  mpz_class p = coeff.get_num(), q = coeff.get_den();
  if (q != 1)
    den.insert(den.begin(), q.get_str());
  std::string numerator;
  if (num.empty())
    numerator = p.get_str();
  else if (p == 1)
    numerator = join(num, "*");
  else if (p == -1)
    numerator = "-" + join(num, "*");
  else
    numerator = p.get_str() + "*" + join(num, "*");
  if (den.empty())
    return numerator;
  if (den.size() == 1)
    return numerator + "/" + divisor_text(den.front());
  return numerator + "/(" + join(den, "*") + ")";
}

std::string print(const Expression &e) {
  switch (e.kind()) {
  case NodeKind::number: return e.value().get_str();
  case NodeKind::symbol: return e.symbol().name();
  case NodeKind::apply: {
    std::vector<std::string> args;
    for (const auto &a : e.children())
      args.push_back(print(a));
    return generators::derivative_name(e.symbol(), e.derivative()) + "(" + join(args, ", ") + ")";
  }
  case NodeKind::elementary:
    return std::string(to_string(e.function())) + "(" + print(e.children().front()) + ")";
  case NodeKind::sum: {
    std::string out;
    bool first = true;
    for (const auto &k : e.children()) {
      std::string s = print(k);
      if (first)
        out = s;
      else if (!s.empty() && s.front() == '-')
        out += " - " + s.substr(1);
      else
        out += " + " + s;
      first = false;
    }
    return out;
  }
  case NodeKind::product: return print_product(e);
  case NodeKind::power:
    if (e.exponent() < 0)
      return "1/" + divisor_text(reciprocal_text(e.children().front(), -e.exponent()));
    return power_text(e.children().front(), e.exponent());
  }
  return "?";
}

} // namespace

std::string Expression::to_string() const { return print(*this); }

std::ostream &operator<<(std::ostream &os, const Expression &e) { return os << e.to_string(); }

std::string format(const RationalFunction &r) { return Expression::from_normal_form(r).to_string(); }

// ---------------------------------------------------------------------------
// Arithmetic

Expression Expression::operator-() const { return from_normal_form(-normal_form()); }

Expression operator+(const Expression &a, const Expression &b) {
  return Expression::from_normal_form(a.normal_form() + b.normal_form());
}

Expression operator-(const Expression &a, const Expression &b) {
  return Expression::from_normal_form(a.normal_form() - b.normal_form());
}

Expression operator*(const Expression &a, const Expression &b) {
  return Expression::from_normal_form(a.normal_form() * b.normal_form());
}

Expression operator/(const Expression &a, const Expression &b) {
  if (b.normal_form().is_zero())
    throw ExpressionError("division by zero");
  return Expression::from_normal_form(a.normal_form() / b.normal_form());
}

Expression Expression::pow(int exponent) const {
  if (exponent < 0 && normal_form().is_zero())
    throw ExpressionError("division by zero");
  return from_normal_form(normal_form().pow(exponent));
}

bool structurally_equal(const Expression &a, const Expression &b) {
  if (a.node_ == b.node_)
    return true;
  const auto &x = *a.node_, &y = *b.node_;
  if (x.kind != y.kind || x.kids.size() != y.kids.size())
    return false;
  switch (x.kind) {
  case NodeKind::number:
    if (x.value != y.value)
      return false;
    break;
  case NodeKind::symbol:
    if (x.sym != y.sym)
      return false;
    break;
  case NodeKind::apply:
    if (x.sym != y.sym || x.deriv != y.deriv)
      return false;
    break;
  case NodeKind::elementary:
    if (x.fn != y.fn)
      return false;
    break;
  case NodeKind::power:
    if (x.exponent != y.exponent)
      return false;
    break;
  default: break;
  }
  for (std::size_t i = 0; i < x.kids.size(); ++i)
    if (!structurally_equal(x.kids[i], y.kids[i]))
      return false;
  return true;
}

Expression normalize(const Expression &e) { return Expression::from_normal_form(e.normal_form()); }

// ---------------------------------------------------------------------------
// Dependencies

std::vector<Symbol> free_symbols(const RationalFunction &r) {
  auto out = deps_of(r);
  std::sort(out.begin(), out.end(), [](Symbol a, Symbol b) { return a.name() < b.name(); });
  return out;
}

std::vector<Symbol> free_symbols(const Expression &e) { return free_symbols(e.normal_form()); }

namespace {
void collect_functions(const RationalFunction &r, std::vector<Symbol> &out) {
  for (GenId g : r.generators()) {
    const auto &gi = generators::info(g);
    if (gi.kind == GenKind::formal)
      out.push_back(gi.symbol);
    for (const auto &a : gi.args)
      collect_functions(a, out);
  }
}
} // namespace

std::vector<Symbol> formal_functions(const RationalFunction &r) {
  std::vector<Symbol> out;
  collect_functions(r, out);
  std::sort(out.begin(), out.end(), [](Symbol a, Symbol b) { return a.name() < b.name(); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool depends_on(const RationalFunction &r, Symbol v) {
  for (GenId g : r.generators())
    if (gen_depends_on(g, v))
      return true;
  return false;
}

bool depends_on(const Expression &e, Symbol v) { return depends_on(e.normal_form(), v); }

bool is_rational(const RationalFunction &r) {
  for (GenId g : r.generators())
    if (generators::info(g).kind != GenKind::symbol)
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

struct DerivativeCache {
  std::shared_mutex mutex;
  std::unordered_map<std::uint64_t, RationalFunction> values;
};

DerivativeCache &derivative_cache() {
  static DerivativeCache c;
  return c;
}

RationalFunction generator_derivative(GenId g, Symbol v) {
  const GeneratorInfo &gi = generators::info(g);
  if (gi.kind == GenKind::symbol)
    return gi.symbol == v ? RationalFunction(1L) : RationalFunction();
  if (!gen_depends_on(g, v))
    return {};
  std::uint64_t key = (static_cast<std::uint64_t>(g) << 32) | v.id();
  auto &cache = derivative_cache();
  {
    std::shared_lock lock(cache.mutex);
    if (auto it = cache.values.find(key); it != cache.values.end())
      return it->second;
  }
  RationalFunction out;
  if (gi.kind == GenKind::formal) {
    for (std::size_t i = 0; i < gi.args.size(); ++i) {
      RationalFunction da = derivative(gi.args[i], v);
      if (da.is_zero())
        continue;
      MultiIndex alpha = gi.derivative;
      ++alpha[i];
      out = out + generator_rf(generators::formal(gi.symbol, std::move(alpha), gi.args)) * da;
    }
  } else {
    const RationalFunction &a = gi.args.front();
    RationalFunction da = derivative(a, v);
    switch (gi.fn) {
    case ElementaryFn::sin: out = elementary_nf(ElementaryFn::cos, a) * da; break;
    case ElementaryFn::cos: out = -(elementary_nf(ElementaryFn::sin, a) * da); break;
    case ElementaryFn::exp: out = generator_rf(g) * da; break;
    case ElementaryFn::log: out = da / a; break;
    }
  }
  std::unique_lock lock(cache.mutex);
  return cache.values.emplace(key, out).first->second;
}

RationalFunction polynomial_derivative(const Polynomial &p, Symbol v) {
  RationalFunction out;
  for (GenId g : p.generators()) {
    if (!gen_depends_on(g, v))
      continue;
    RationalFunction dg = generator_derivative(g, v);
    if (dg.is_zero())
      continue;
    out = out + RationalFunction(p.partial(g)) * dg;
  }
  return out;
}

} // namespace

RationalFunction derivative(const RationalFunction &r, Symbol v) {
  if (v.is_function())
    throw ExpressionError("cannot differentiate with respect to function symbol '" + v.name() + "'");
  if (!depends_on(r, v))
    return {};
  RationalFunction dn = polynomial_derivative(r.num(), v);
  if (r.is_polynomial())
    return dn / RationalFunction(r.den());
  RationalFunction dd = polynomial_derivative(r.den(), v);
  RationalFunction den(r.den());
  return (dn * den - RationalFunction(r.num()) * dd) / (den * den);
}

Expression differentiate(const Expression &e, Symbol v) {
  return Expression::from_normal_form(derivative(e.normal_form(), v));
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

struct Substituter {
  const std::map<Symbol, RationalFunction> &bindings;
  std::vector<Symbol> bound;
  std::unordered_map<GenId, RationalFunction> cache;

  explicit Substituter(const std::map<Symbol, RationalFunction> &b) : bindings(b) {
    for (const auto &[s, _] : b) {
      if (s.is_function())
        throw ExpressionError("cannot substitute for function symbol '" + s.name() + "'");
      bound.push_back(s);
    }
    std::sort(bound.begin(), bound.end());
  }

  bool touches(GenId g) const {
    const auto &d = generators::info(g).depends_on;
    auto it1 = d.begin(), it2 = bound.begin();
    while (it1 != d.end() && it2 != bound.end()) {
      if (*it1 == *it2)
        return true;
      if (*it1 < *it2)
        ++it1;
      else
        ++it2;
    }
    return false;
  }

  RationalFunction gen(GenId g) {
    if (auto it = cache.find(g); it != cache.end())
      return it->second;
    RationalFunction out;
    if (!touches(g)) {
      out = generator_rf(g);
    } else {
      const GeneratorInfo &gi = generators::info(g);
      switch (gi.kind) {
      case GenKind::symbol: out = bindings.at(gi.symbol); break;
      case GenKind::formal: {
        std::vector<RationalFunction> args;
        for (const auto &a : gi.args)
          args.push_back(rf(a));
        out = generator_rf(generators::formal(gi.symbol, gi.derivative, std::move(args)));
        break;
      }
      case GenKind::elementary: out = elementary_nf(gi.fn, rf(gi.args.front())); break;
      }
    }
    cache.emplace(g, out);
    return out;
  }

  RationalFunction poly(const Polynomial &p) {
    bool any = false;
    for (GenId g : p.generators())
      if (touches(g)) {
        any = true;
        break;
      }
    if (!any)
      return RationalFunction(p);
    RationalFunction out;
    for (const auto &t : p.terms()) {
      RationalFunction term(t.coeff);
      for (const auto &[g, e] : t.mono)
        term = term * gen(g).pow(e);
      out = out + term;
    }
    return out;
  }

  RationalFunction rf(const RationalFunction &r) {
    RationalFunction n = poly(r.num());
    if (r.is_polynomial())
      return n / RationalFunction(r.den());
    RationalFunction d = poly(r.den());
    if (d.is_zero())
      throw ExpressionError("substitution makes a denominator vanish");
    return n / d;
  }
};

} // namespace

RationalFunction substitute(const RationalFunction &r, const std::map<Symbol, RationalFunction> &bindings) {
  if (bindings.empty())
    return r;
  Substituter sub(bindings);
  return sub.rf(r);
}

Expression substitute(const Expression &e, const Substitution &bindings) {
  std::map<Symbol, RationalFunction> b;
  for (const auto &[s, v] : bindings)
    b.emplace(s, v.normal_form());
  return Expression::from_normal_form(substitute(e.normal_form(), b));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Evaluator {
  const std::map<Symbol, double> &point;
  const FormalInterpretation &formal;
  double pole_radius;
  std::unordered_map<GenId, std::optional<double>> cache;

  std::optional<double> gen(GenId g) {
    if (auto it = cache.find(g); it != cache.end())
      return it->second;
    const GeneratorInfo &gi = generators::info(g);
    std::optional<double> out;
    switch (gi.kind) {
    case GenKind::symbol: {
      auto it = point.find(gi.symbol);
      if (it == point.end())
        throw ExpressionError("no value given for symbol '" + gi.symbol.name() + "'");
      out = it->second;
      break;
    }
    case GenKind::formal: {
      if (!formal)
        throw ExpressionError("no interpretation for formal function '" + gi.symbol.name() + "'");
      std::vector<double> args;
      bool ok = true;
      for (const auto &a : gi.args) {
        auto v = rf(a);
        if (!v) {
          ok = false;
          break;
        }
        args.push_back(v->value);
      }
      if (ok)
        out = formal(gi.symbol, gi.derivative, args);
      break;
    }
    case GenKind::elementary: {
      auto v = rf(gi.args.front());
      if (!v)
        break;
      double x = v->value;
      switch (gi.fn) {
      case ElementaryFn::sin: out = std::sin(x); break;
      case ElementaryFn::cos: out = std::cos(x); break;
      case ElementaryFn::exp: out = std::exp(x); break;
      case ElementaryFn::log:
        if (x > 0)
          out = std::log(x);
        break;
      }
      break;
    }
    }
    if (out && !std::isfinite(*out))
      out.reset();
    cache.emplace(g, out);
    return out;
  }

  std::optional<NumericValue> poly(const Polynomial &p) {
    double value = 0, magnitude = 0;
    for (const auto &t : p.terms()) {
      double term = t.coeff.get_d();
      for (const auto &[g, e] : t.mono) {
        auto v = gen(g);
        if (!v)
          return std::nullopt;
        term *= std::pow(*v, e);
      }
      value += term;
      magnitude += std::fabs(term);
    }
    return NumericValue{value, magnitude};
  }

  std::optional<NumericValue> rf(const RationalFunction &r) {
    auto n = poly(r.num());
    if (!n)
      return std::nullopt;
    auto d = poly(r.den());
    if (!d)
      return std::nullopt;
    if (std::fabs(d->value) < pole_radius * std::max(1.0, d->magnitude))
      return std::nullopt;
    NumericValue out{n->value / d->value, n->magnitude / std::fabs(d->value)};
    if (!std::isfinite(out.value) || !std::isfinite(out.magnitude))
      return std::nullopt;
    return out;
  }
};

} // namespace

std::optional<NumericValue> evaluate(const RationalFunction &r, const std::map<Symbol, double> &point,
                                     const FormalInterpretation &formal, double pole_radius) {
  Evaluator ev{point, formal, pole_radius, {}};
  return ev.rf(r);
}

std::optional<mpq_class> evaluate_exact(const RationalFunction &r, const std::map<Symbol, mpq_class> &point) {
  if (!is_rational(r))
    return std::nullopt;
  auto eval_poly = [&](const Polynomial &p) {
    mpq_class acc = 0;
    for (const auto &t : p.terms()) {
      mpq_class term = t.coeff;
      for (const auto &[g, e] : t.mono) {
        Symbol s = generators::info(g).symbol;
        auto it = point.find(s);
        if (it == point.end())
          throw ExpressionError("no value given for symbol '" + s.name() + "'");
        for (int i = 0; i < e; ++i)
          term *= it->second;
      }
      acc += term;
    }
    return acc;
  };
  mpq_class d = eval_poly(r.den());
  if (d == 0)
    return std::nullopt;
  mpq_class out = eval_poly(r.num()) / d;
  out.canonicalize();
  return out;
}

} // namespace klab
