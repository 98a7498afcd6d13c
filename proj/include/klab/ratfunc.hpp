#pragma once

#include "klab/polynomial.hpp"

#include <string>

namespace klab {

/// Canonical multivariate rational function num/den over the generator set.
///
/// Invariants: den != 0, gcd(num, den) = 1, and den is scaled so that its
/// leading term under the name order of generators has coefficient 1. Two
/// equal rational functions therefore have identical representations.
class RationalFunction {
public:
  RationalFunction() : den_(1L) {}
  RationalFunction(long value) : num_(value), den_(1L) {}
  RationalFunction(const mpq_class &value) : num_(value), den_(1L) {}
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1L) {}
  /// Builds and canonicalizes num/den. Throws std::domain_error when den == 0.
  RationalFunction(Polynomial num, Polynomial den);

  const Polynomial &num() const { return num_; }
  const Polynomial &den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  mpq_class constant_value() const { return num_.constant_value() / den_.constant_value(); }
  std::vector<GenId> generators() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b);
  friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b);
  RationalFunction pow(int exponent) const;

  friend bool operator==(const RationalFunction &a, const RationalFunction &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

private:
  struct Reduced {};
  RationalFunction(Polynomial num, Polynomial den, Reduced);
  void canonicalize_scale();
  Polynomial num_;
  Polynomial den_;
};

} // namespace klab
