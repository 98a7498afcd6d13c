#pragma once

#include "klab/expression.hpp"

#include <string>
#include <string_view>

namespace klab {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string &message);
  int line;
  int column;
  std::string detail;
};

struct ParseOptions {
  /// Declare unknown identifiers instead of rejecting them.
  bool declare_unknown = false;
  SymbolKind unknown_kind = SymbolKind::coordinate;
};

/// Parses infix text into an Expression tree (not normalized).
///
/// Grammar: sums and differences of products and quotients of powers with
/// integer exponents (`x^2`, `x^-1`, `x^(-1)`), rational literals (`3`, `0.25`),
/// declared symbols, calls of declared formal functions, the elementary
/// functions sin, cos, exp, log, and formal derivatives written `f__d1_0(x, y)`.
Expression parse(std::string_view text, const ParseOptions &options = {});

} // namespace klab
