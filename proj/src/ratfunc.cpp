#include "klab/ratfunc.hpp"

#include "klab/generators.hpp"

#include <algorithm>
#include <stdexcept>

namespace klab {

namespace {
Polynomial exact_div(const Polynomial &a, const Polynomial &b) {
  auto q = Polynomial::divide_exact(a, b);
  if (!q)
    throw std::logic_error("rational function: inexact division");
  return *q;
}
} // namespace

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
  if (den.is_zero())
    throw std::domain_error("division by zero");
  if (num.is_zero()) {
    den_ = Polynomial(1L);
    return;
  }
  if (!den.is_constant()) {
    Polynomial g = gcd(num, den);
    if (!g.is_constant()) {
      num = exact_div(num, g);
      den = exact_div(den, g);
    }
  }
  num_ = std::move(num);
  den_ = std::move(den);
  canonicalize_scale();
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den, Reduced)
    : num_(std::move(num)), den_(std::move(den)) {
  if (num_.is_zero())
    den_ = Polynomial(1L);
  else
    canonicalize_scale();
}

void RationalFunction::canonicalize_scale() {
  if (den_.is_constant()) {
    mpq_class c = den_.constant_value();
    if (c != 1) {
      num_ = num_.scaled(1 / c);
      den_ = Polynomial(1L);
    }
    return;
  }
  const Term *lead = &den_.terms().front();
  for (const auto &t : den_.terms())
    if (generators::compare(t.mono, lead->mono) > 0)
      lead = &t;
  if (lead->coeff != 1) {
    mpq_class c = 1 / lead->coeff;
    num_ = num_.scaled(c);
    den_ = den_.scaled(c);
  }
}

std::vector<GenId> RationalFunction::generators() const {
  auto a = num_.generators();
  auto b = den_.generators();
  std::vector<GenId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

RationalFunction RationalFunction::operator-() const {
  return RationalFunction(-num_, den_, Reduced{});
}

RationalFunction operator+(const RationalFunction &a, const RationalFunction &b) {
  if (a.is_zero())
    return b;
  if (b.is_zero())
    return a;
  if (a.den_ == b.den_) {
    if (a.den_.is_constant())
      return RationalFunction(a.num_ + b.num_, a.den_, RationalFunction::Reduced{});
    return RationalFunction(a.num_ + b.num_, a.den_);
  }
  if (a.den_.is_constant() && b.den_.is_constant())
    return RationalFunction(a.num_.scaled(b.den_.constant_value()) + b.num_.scaled(a.den_.constant_value()),
                            a.den_.scaled(b.den_.constant_value()));
  Polynomial g = gcd(a.den_, b.den_);
  Polynomial da = exact_div(a.den_, g), db = exact_div(b.den_, g);
  Polynomial num = a.num_ * db + b.num_ * da;
  Polynomial den = a.den_ * db;
  if (g.is_constant())
    return RationalFunction(std::move(num), std::move(den), RationalFunction::Reduced{});
  return RationalFunction(std::move(num), std::move(den));
}

RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) { return a + (-b); }

RationalFunction operator*(const RationalFunction &a, const RationalFunction &b) {
  if (a.is_zero() || b.is_zero())
    return {};
  if (a.is_polynomial() && b.is_polynomial())
    return RationalFunction(a.num_ * b.num_, Polynomial(1L), RationalFunction::Reduced{});
  Polynomial g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
  Polynomial n = exact_div(a.num_, g1) * exact_div(b.num_, g2);
  Polynomial d = exact_div(a.den_, g2) * exact_div(b.den_, g1);
  return RationalFunction(std::move(n), std::move(d), RationalFunction::Reduced{});
}

RationalFunction operator/(const RationalFunction &a, const RationalFunction &b) {
  if (b.is_zero())
    throw std::domain_error("division by zero");
  RationalFunction inv(b.den_, b.num_, RationalFunction::Reduced{});
  return a * inv;
}

RationalFunction RationalFunction::pow(int exponent) const {
  if (exponent == 0)
    return RationalFunction(1L);
  if (exponent < 0) {
    if (is_zero())
      throw std::domain_error("zero raised to a negative power");
    return RationalFunction(den_.pow(static_cast<unsigned>(-exponent)),
                            num_.pow(static_cast<unsigned>(-exponent)), Reduced{});
  }
  return RationalFunction(num_.pow(static_cast<unsigned>(exponent)), den_.pow(static_cast<unsigned>(exponent)),
                          Reduced{});
}

} // namespace klab
