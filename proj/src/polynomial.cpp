#include "klab/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace klab {

int lex_compare(const Monomial &a, const Monomial &b) {
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) {
    if (a[i].first != b[i].first)
      return a[i].first < b[i].first ? 1 : -1;
    if (a[i].second != b[i].second)
      return a[i].second > b[i].second ? 1 : -1;
  }
  if (a.size() == b.size())
    return 0;
  return i < a.size() ? 1 : -1;
}

Monomial mono_mul(const Monomial &a, const Monomial &b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
      out.push_back(a[i++]);
    else if (i == a.size() || b[j].first < a[i].first)
      out.push_back(b[j++]);
    else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::optional<Monomial> mono_div(const Monomial &a, const Monomial &b) {
  Monomial out;
  std::size_t i = 0;
  for (const auto &[g, e] : b) {
    while (i < a.size() && a[i].first < g)
      out.push_back(a[i++]);
    if (i == a.size() || a[i].first != g || a[i].second < e)
      return std::nullopt;
    if (a[i].second > e)
      out.emplace_back(g, a[i].second - e);
    ++i;
  }
  while (i < a.size())
    out.push_back(a[i++]);
  return out;
}

int mono_degree(const Monomial &m, GenId g) {
  for (const auto &[h, e] : m)
    if (h == g)
      return e;
  return 0;
}

namespace {
struct LexGreater {
  bool operator()(const Monomial &a, const Monomial &b) const { return lex_compare(a, b) > 0; }
};
using Accumulator = std::map<Monomial, mpq_class, LexGreater>;

Polynomial from_accumulator(Accumulator &acc) {
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto &[m, c] : acc)
    if (sgn(c) != 0)
      terms.push_back(Term{m, c});
  return Polynomial::from_terms(std::move(terms));
}
} // namespace

Polynomial::Polynomial(long value) {
  if (value != 0)
    terms_.push_back(Term{{}, mpq_class(value)});
}

Polynomial::Polynomial(const mpq_class &value) {
  if (sgn(value) != 0)
    terms_.push_back(Term{{}, value});
}

Polynomial Polynomial::generator(GenId g, int exponent) {
  Polynomial p;
  if (exponent == 0)
    return Polynomial(1L);
  p.terms_.push_back(Term{{{g, exponent}}, mpq_class(1)});
  return p;
}

// Terms must already be sorted in decreasing lex order with distinct monomials.
Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  Polynomial p;
  p.terms_ = std::move(terms);
  return p;
}

mpq_class Polynomial::constant_value() const {
  assert(is_constant());
  return terms_.empty() ? mpq_class(0) : terms_[0].coeff;
}

bool Polynomial::contains(GenId g) const {
  for (const auto &t : terms_)
    if (mono_degree(t.mono, g) > 0)
      return true;
  return false;
}

int Polynomial::degree(GenId g) const {
  int d = 0;
  for (const auto &t : terms_)
    d = std::max(d, mono_degree(t.mono, g));
  return d;
}

std::vector<GenId> Polynomial::generators() const {
  std::vector<GenId> out;
  for (const auto &t : terms_)
    for (const auto &[g, e] : t.mono)
      out.push_back(g);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::map<int, Polynomial> Polynomial::coefficients_in(GenId g) const {
  std::map<int, Accumulator> acc;
  for (const auto &t : terms_) {
    Monomial rest;
    int d = 0;
    for (const auto &pe : t.mono) {
      if (pe.first == g)
        d = pe.second;
      else
        rest.push_back(pe);
    }
    acc[d][rest] += t.coeff;
  }
  std::map<int, Polynomial> out;
  for (auto &[d, a] : acc) {
    auto p = from_accumulator(a);
    if (!p.is_zero())
      out.emplace(d, std::move(p));
  }
  return out;
}

Polynomial Polynomial::coefficient_of(GenId g, int degree) const {
  Accumulator acc;
  for (const auto &t : terms_) {
    if (mono_degree(t.mono, g) != degree)
      continue;
    Monomial rest;
    for (const auto &pe : t.mono)
      if (pe.first != g)
        rest.push_back(pe);
    acc[rest] += t.coeff;
  }
  return from_accumulator(acc);
}

Polynomial Polynomial::partial(GenId g) const {
  Accumulator acc;
  for (const auto &t : terms_) {
    int d = mono_degree(t.mono, g);
    if (d == 0)
      continue;
    Monomial m;
    for (const auto &pe : t.mono) {
      if (pe.first != g)
        m.push_back(pe);
      else if (pe.second > 1)
        m.emplace_back(g, pe.second - 1);
    }
    acc[m] += t.coeff * d;
  }
  return from_accumulator(acc);
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto &t : p.terms_)
    t.coeff = -t.coeff;
  return p;
}

Polynomial operator+(const Polynomial &a, const Polynomial &b) {
  std::vector<Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    int c = i == a.terms_.size()   ? -1
            : j == b.terms_.size() ? 1
                                   : lex_compare(a.terms_[i].mono, b.terms_[j].mono);
    if (c > 0)
      out.push_back(a.terms_[i++]);
    else if (c < 0)
      out.push_back(b.terms_[j++]);
    else {
      mpq_class s = a.terms_[i].coeff + b.terms_[j].coeff;
      if (sgn(s) != 0)
        out.push_back(Term{a.terms_[i].mono, s});
      ++i;
      ++j;
    }
  }
  return Polynomial::from_terms(std::move(out));
}

Polynomial operator-(const Polynomial &a, const Polynomial &b) { return a + (-b); }

Polynomial operator*(const Polynomial &a, const Polynomial &b) {
  if (a.is_zero() || b.is_zero())
    return {};
  if (b.terms_.size() == 1)
    return a.times_monomial(b.terms_[0].mono, b.terms_[0].coeff);
  if (a.terms_.size() == 1)
    return b.times_monomial(a.terms_[0].mono, a.terms_[0].coeff);
  Accumulator acc;
  for (const auto &s : a.terms_)
    for (const auto &t : b.terms_)
      acc[mono_mul(s.mono, t.mono)] += s.coeff * t.coeff;
  return from_accumulator(acc);
}

Polynomial Polynomial::scaled(const mpq_class &c) const {
  if (sgn(c) == 0)
    return {};
  Polynomial p = *this;
  for (auto &t : p.terms_)
    t.coeff *= c;
  return p;
}

// Multiplying every term by the same monomial preserves the lex order.
Polynomial Polynomial::times_monomial(const Monomial &m, const mpq_class &c) const {
  if (sgn(c) == 0)
    return {};
  Polynomial p;
  p.terms_.reserve(terms_.size());
  for (const auto &t : terms_)
    p.terms_.push_back(Term{mono_mul(t.mono, m), t.coeff * c});
  return p;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(1L), base = *this;
  while (exponent) {
    if (exponent & 1u)
      result *= base;
    exponent >>= 1u;
    if (exponent)
      base *= base;
  }
  return result;
}

bool operator==(const Polynomial &a, const Polynomial &b) {
  if (a.terms_.size() != b.terms_.size())
    return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  return true;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial &a, const Polynomial &b) {
  if (b.is_zero())
    throw std::domain_error("polynomial division by zero");
  if (b.is_constant())
    return a.scaled(1 / b.constant_value());
  if (b.is_monomial()) {
    std::vector<Term> out;
    out.reserve(a.terms_.size());
    for (const auto &t : a.terms_) {
      auto q = mono_div(t.mono, b.terms_[0].mono);
      if (!q)
        return std::nullopt;
      out.push_back(Term{std::move(*q), t.coeff / b.terms_[0].coeff});
    }
    return from_terms(std::move(out));
  }
  Polynomial quotient, rest = a;
  const Term &lb = b.leading_term();
  while (!rest.is_zero()) {
    const Term &lr = rest.leading_term();
    auto m = mono_div(lr.mono, lb.mono);
    if (!m)
      return std::nullopt;
    mpq_class c = lr.coeff / lb.coeff;
    quotient += Polynomial::from_terms({Term{*m, c}});
    rest -= b.times_monomial(*m, c);
  }
  return quotient;
}

Polynomial Polynomial::monic() const {
  if (is_zero())
    return {};
  return scaled(1 / terms_.front().coeff);
}

namespace {

Polynomial exact(const Polynomial &a, const Polynomial &b) {
  auto q = Polynomial::divide_exact(a, b);
  if (!q)
    throw std::logic_error("gcd: inexact division");
  return *q;
}

Polynomial monomial_gcd(const Monomial &m, const Polynomial &p) {
  Monomial g = m;
  for (const auto &t : p.terms()) {
    Monomial next;
    for (const auto &[gen, e] : g) {
      int d = std::min(e, mono_degree(t.mono, gen));
      if (d > 0)
        next.emplace_back(gen, d);
    }
    g = std::move(next);
    if (g.empty())
      break;
  }
  return Polynomial::from_terms({Term{g, mpq_class(1)}});
}

Polynomial content_in(const Polynomial &p, GenId v) {
  Polynomial c;
  for (const auto &[d, coeff] : p.coefficients_in(v)) {
    c = gcd(c, coeff);
    if (c.is_constant())
      return Polynomial(1L);
  }
  return c;
}

// Integer coefficients without common factor, positive leading coefficient.
Polynomial numeric_primitive(const Polynomial &p) {
  if (p.is_zero())
    return p;
  mpz_class num = 0, den = 1;
  for (const auto &t : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  mpq_class scale(den, num);
  scale.canonicalize();
  if (p.leading_term().coeff < 0)
    scale = -scale;
  return scale == 1 ? p : p.scaled(scale);
}

Polynomial primitive_in(const Polynomial &p, GenId v) {
  if (p.is_zero())
    return p;
  return numeric_primitive(exact(p, content_in(p, v)));
}

// Pseudo-remainder of a by b viewed as polynomials in v.
Polynomial pseudo_remainder(Polynomial a, const Polynomial &b, GenId v) {
  int db = b.degree(v);
  Polynomial lb = b.coefficient_of(v, db);
  while (!a.is_zero()) {
    int da = a.degree(v);
    if (da < db)
      break;
    Polynomial la = a.coefficient_of(v, da);
    Polynomial shift = la * Polynomial::generator(v, da - db);
    a = lb * a - shift * b;
  }
  return a;
}

mpz_class max_norm(const Polynomial &p) {
  mpz_class m = 0;
  for (const auto &t : p.terms())
    if (abs(t.coeff.get_num()) > m)
      m = abs(t.coeff.get_num());
  return m;
}

mpz_class isqrt(const mpz_class &v) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

Polynomial integer_polynomial(Accumulator &acc) { return from_accumulator(acc); }

// p with x replaced by the integer xi.
Polynomial evaluate_at(const Polynomial &p, GenId x, const mpz_class &xi) {
  Accumulator acc;
  for (const auto &t : p.terms()) {
    Monomial m;
    int e = 0;
    for (const auto &[g, k] : t.mono)
      if (g == x)
        e = k;
      else
        m.emplace_back(g, k);
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), xi.get_mpz_t(), static_cast<unsigned long>(e));
    acc[m] += t.coeff * mpq_class(power);
  }
  return integer_polynomial(acc);
}

// Symmetric xi-adic expansion of h as a polynomial in x.
Polynomial interpolate(Polynomial h, GenId x, const mpz_class &xi) {
  Accumulator acc;
  mpz_class half = xi / 2;
  for (int i = 0; !h.is_zero(); ++i) {
    std::vector<Term> digit_terms, rest_terms;
    for (const auto &t : h.terms()) {
      mpz_class c = t.coeff.get_num(), r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
      if (r > half)
        r -= xi;
      if (r != 0) {
        Monomial m = i ? mono_mul(t.mono, {{x, i}}) : t.mono;
        acc[m] += mpq_class(r);
      }
      mpz_class q = (c - r) / xi;
      if (q != 0)
        rest_terms.push_back(Term{t.mono, mpq_class(q)});
    }
    h = Polynomial::from_terms(std::move(rest_terms));
  }
  return integer_polynomial(acc);
}

std::optional<Polynomial> heuristic_gcd(const Polynomial &f, const Polynomial &g);

Polynomial numeric_primitive(const Polynomial &p);

// Integer gcd of all coefficients.
Polynomial integer_content_gcd(const Polynomial &f, const Polynomial &g) {
  mpz_class c = 0;
  for (const auto *p : {&f, &g})
    for (const auto &t : p->terms())
      mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), t.coeff.get_num_mpz_t());
  return Polynomial(mpq_class(c));
}

// Heuristic gcd by evaluation at large integers (f, g with integer coefficients).
std::optional<Polynomial> heuristic_gcd(const Polynomial &f, const Polynomial &g) {
  if (f.is_zero() || g.is_zero())
    return std::nullopt;
  if (f.is_constant() || g.is_constant())
    return integer_content_gcd(f, g);
  auto gf = f.generators(), gg = g.generators();
  GenId x = std::min(gf.front(), gg.front());
  mpz_class B = 2 * std::min(max_norm(f), max_norm(g)) + 29;
  mpz_class xi = std::max(mpz_class(std::min(B, mpz_class(99 * isqrt(B)))),
                          mpz_class(2 * std::min(max_norm(f.coefficient_of(x, f.degree(x))),
                                                 max_norm(g.coefficient_of(x, g.degree(x)))) +
                                    2));
  for (int attempt = 0; attempt < 6; ++attempt) {
    Polynomial ff = evaluate_at(f, x, xi), gv = evaluate_at(g, x, xi);
    if (!ff.is_zero() && !gv.is_zero()) {
      if (auto h = heuristic_gcd(ff, gv)) {
        Polynomial cand = numeric_primitive(interpolate(*h, x, xi));
        if (!cand.is_zero() && Polynomial::divide_exact(f, cand) && Polynomial::divide_exact(g, cand))
          return cand * integer_content_gcd(f, g);
      }
    }
    xi = xi * 73794 * isqrt(isqrt(xi)) / 27011;
  }
  return std::nullopt;
}

} // namespace

Polynomial gcd(const Polynomial &a, const Polynomial &b) {
  if (a.is_zero())
    return b.monic();
  if (b.is_zero())
    return a.monic();
  if (a.is_constant() || b.is_constant())
    return Polynomial(1L);
  if (a == b)
    return a.monic();
  if (a.is_monomial())
    return monomial_gcd(a.leading_term().mono, b);
  if (b.is_monomial())
    return monomial_gcd(b.leading_term().mono, a);

  auto ga = a.generators(), gb = b.generators();
  // A generator missing from one side: the gcd divides every coefficient of
  // the other side in that generator.
  for (int side = 0; side < 2; ++side) {
    const auto &mine = side ? gb : ga, &other = side ? ga : gb;
    const Polynomial &p = side ? b : a, &q = side ? a : b;
    for (GenId g : mine)
      if (!std::binary_search(other.begin(), other.end(), g)) {
        Polynomial acc = q;
        for (const auto &[d, coeff] : p.coefficients_in(g)) {
          acc = gcd(acc, coeff);
          if (acc.is_constant())
            return Polynomial(1L);
        }
        return acc.monic();
      }
  }
  if (auto h = heuristic_gcd(numeric_primitive(a), numeric_primitive(b)))
    return h->monic();
  GenId v = ga.front();

  Polynomial ca = content_in(a, v), cb = content_in(b, v);
  Polynomial c = gcd(ca, cb);
  Polynomial pa = numeric_primitive(exact(a, ca)), pb = numeric_primitive(exact(b, cb));
  if (pa.degree(v) < pb.degree(v))
    std::swap(pa, pb);
  while (!pb.is_zero()) {
    Polynomial r = pseudo_remainder(pa, pb, v);
    pa = std::move(pb);
    pb = primitive_in(r, v);
  }
  Polynomial g = primitive_in(pa, v);
  return (c * g).monic();
}

} // namespace klab
