#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace klab {

/// Index of a polynomial generator: a coordinate/parameter symbol or an opaque
/// atom such as f__d1_0(x, y) or sin(x). See generators.hpp.
using GenId = std::uint32_t;

/// Power product, sorted by generator id, all exponents positive.
using Monomial = std::vector<std::pair<GenId, int>>;

/// Lexicographic monomial order on generator ids (smaller id = more significant).
/// Returns <0, 0, >0.
int lex_compare(const Monomial &a, const Monomial &b);
Monomial mono_mul(const Monomial &a, const Monomial &b);
/// a / b when b divides a.
std::optional<Monomial> mono_div(const Monomial &a, const Monomial &b);
int mono_degree(const Monomial &m, GenId g);

struct Term {
  Monomial mono;
  mpq_class coeff;
};

/// Sparse multivariate polynomial over Q, terms kept in decreasing lex order.
class Polynomial {
public:
  Polynomial() = default;
  Polynomial(long value);
  Polynomial(const mpq_class &value);
  static Polynomial generator(GenId g, int exponent = 1);
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }
  /// Constant value; requires is_constant().
  mpq_class constant_value() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const Term &leading_term() const { return terms_.front(); }

  bool contains(GenId g) const;
  int degree(GenId g) const;
  /// Sorted list of generators that occur.
  std::vector<GenId> generators() const;
  /// Coefficients as a polynomial in g: degree -> coefficient (free of g).
  std::map<int, Polynomial> coefficients_in(GenId g) const;
  Polynomial coefficient_of(GenId g, int degree) const;
  Polynomial partial(GenId g) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial &a, const Polynomial &b);
  friend Polynomial operator-(const Polynomial &a, const Polynomial &b);
  friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
  Polynomial &operator+=(const Polynomial &o) { return *this = *this + o; }
  Polynomial &operator-=(const Polynomial &o) { return *this = *this - o; }
  Polynomial &operator*=(const Polynomial &o) { return *this = *this * o; }
  Polynomial scaled(const mpq_class &c) const;
  Polynomial times_monomial(const Monomial &m, const mpq_class &c) const;
  Polynomial pow(unsigned exponent) const;

  friend bool operator==(const Polynomial &a, const Polynomial &b);

  /// Exact quotient a / b, or nullopt when b does not divide a.
  static std::optional<Polynomial> divide_exact(const Polynomial &a, const Polynomial &b);
  /// Scales so that the leading (lex) coefficient is 1.
  Polynomial monic() const;

private:
  std::vector<Term> terms_;
};

/// Greatest common divisor over Q, normalized monic. gcd(0, 0) = 0.
Polynomial gcd(const Polynomial &a, const Polynomial &b);

} // namespace klab
