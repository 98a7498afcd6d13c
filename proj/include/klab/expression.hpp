#pragma once

#include "klab/generators.hpp"
#include "klab/ratfunc.hpp"
#include "klab/symbols.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace klab {

enum class NodeKind { number, symbol, apply, elementary, sum, product, power };

struct ExpressionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Immutable exact scalar expression over registered symbols.
///
/// Every node carries its canonical rational-function normal form, computed
/// once at construction; the tree itself is kept for printing and structural
/// inspection. Arithmetic operators return canonical trees (the tree built
/// from the normal form), so chains of operations never grow unnormalized.
class Expression {
public:
  Expression();
  Expression(int value);
  Expression(long value);
  Expression(const mpq_class &value);
  Expression(Symbol s);

  static Expression number(const mpq_class &value);
  static Expression apply(Symbol f, std::vector<Expression> args, MultiIndex derivative = {});
  static Expression elementary(ElementaryFn fn, Expression arg);
  static Expression sum(std::vector<Expression> terms);
  static Expression product(std::vector<Expression> factors);
  static Expression power(Expression base, int exponent);
  /// Canonical tree for a normal form.
  static Expression from_normal_form(const RationalFunction &nf);

  NodeKind kind() const;
  const mpq_class &value() const;
  Symbol symbol() const;
  const MultiIndex &derivative() const;
  ElementaryFn function() const;
  int exponent() const;
  const std::vector<Expression> &children() const;

  const RationalFunction &normal_form() const;
  /// True for the literal number node 0.
  bool is_literal_zero() const;
  /// Normal form is the zero function (the tree may be any shape).
  bool is_zero() const { return normal_form().is_zero(); }
  bool is_constant() const { return normal_form().is_constant(); }
  /// True when no formal-function or elementary atoms occur in the normal form.
  bool is_rational() const;

  std::string to_string() const;

  Expression operator-() const;
  friend Expression operator+(const Expression &a, const Expression &b);
  friend Expression operator-(const Expression &a, const Expression &b);
  friend Expression operator*(const Expression &a, const Expression &b);
  friend Expression operator/(const Expression &a, const Expression &b);
  Expression &operator+=(const Expression &o) { return *this = *this + o; }
  Expression &operator-=(const Expression &o) { return *this = *this - o; }
  Expression &operator*=(const Expression &o) { return *this = *this * o; }
  Expression pow(int exponent) const;

  friend bool structurally_equal(const Expression &a, const Expression &b);
  /// Equal normal forms.
  friend bool equivalent(const Expression &a, const Expression &b) { return a.normal_form() == b.normal_form(); }

  struct Node;

private:
  friend struct NodeFactory;
  explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::ostream &operator<<(std::ostream &os, const Expression &e);

using Substitution = std::map<Symbol, Expression>;

Expression normalize(const Expression &e);
/// Exact partial derivative in a coordinate or parameter symbol.
Expression differentiate(const Expression &e, Symbol v);
/// Simultaneous substitution followed by normalization.
Expression substitute(const Expression &e, const Substitution &bindings);
/// Coordinate and parameter symbols the normal form depends on, ordered by name.
std::vector<Symbol> free_symbols(const Expression &e);
std::vector<Symbol> free_symbols(const RationalFunction &r);
/// Formal function symbols occurring in the normal form.
std::vector<Symbol> formal_functions(const RationalFunction &r);
bool depends_on(const Expression &e, Symbol v);
bool depends_on(const RationalFunction &r, Symbol v);

// Normal-form level calculus used by the higher modules.
RationalFunction derivative(const RationalFunction &r, Symbol v);
RationalFunction substitute(const RationalFunction &r, const std::map<Symbol, RationalFunction> &bindings);
bool is_rational(const RationalFunction &r);

/// Numeric interpretation of formal functions: (f, derivative, args) -> value.
using FormalInterpretation = std::function<double(Symbol, const MultiIndex &, const std::vector<double> &)>;

struct NumericValue {
  double value;
  /// Sum of absolute term magnitudes, used to scale tolerances.
  double magnitude;
};

/// Floating-point evaluation. Returns nullopt at poles (|den| below
/// `pole_radius` relative to its own magnitude), for log of a non-positive
/// number, or for non-finite results.
std::optional<NumericValue> evaluate(const RationalFunction &r, const std::map<Symbol, double> &point,
                                     const FormalInterpretation &formal, double pole_radius = 1e-3);

/// Exact evaluation for purely rational normal forms; nullopt when atoms occur
/// or the denominator vanishes.
std::optional<mpq_class> evaluate_exact(const RationalFunction &r, const std::map<Symbol, mpq_class> &point);

} // namespace klab
