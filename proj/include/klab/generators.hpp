#pragma once

#include "klab/ratfunc.hpp"
#include "klab/symbols.hpp"

#include <string>
#include <vector>

namespace klab {

enum class ElementaryFn { sin, cos, exp, log };
std::string_view to_string(ElementaryFn fn);

enum class GenKind { symbol, formal, elementary };

/// Partial-derivative counts per argument position of a formal function.
using MultiIndex = std::vector<int>;

/// Data of one interned generator. Arguments of atoms are canonical.
struct GeneratorInfo {
  GenKind kind;
  Symbol symbol;            // the variable, or the formal function symbol
  MultiIndex derivative;    // formal only
  ElementaryFn fn{};        // elementary only
  std::vector<RationalFunction> args;
  std::string key;          // canonical printed form; defines the name order
  std::vector<Symbol> depends_on; // sorted symbols occurring anywhere inside
};

/// Interning table for generators. Append-only and thread-safe.
namespace generators {

GenId of_symbol(Symbol s);
GenId formal(Symbol f, MultiIndex derivative, std::vector<RationalFunction> args);
GenId elementary(ElementaryFn fn, RationalFunction arg);
const GeneratorInfo &info(GenId g);

/// Name-order comparison of generators: compares canonical keys.
int compare(GenId a, GenId b);
/// Name-order comparison of monomials (graded by nothing; plain lex on keys).
int compare(const Monomial &a, const Monomial &b);

/// Encodes the canonical identifier used for a formal derivative, e.g.
/// f__d1_0 for the first partial in the first of two arguments.
std::string derivative_name(Symbol f, const MultiIndex &derivative);

} // namespace generators

/// Canonical text of a rational function (the same text Expression prints
/// for its normal form).
std::string format(const RationalFunction &r);

} // namespace klab
