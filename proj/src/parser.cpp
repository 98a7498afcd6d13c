#include "klab/parser.hpp"

#include <cctype>
#include <optional>

namespace klab {

ParseError::ParseError(int line_, int column_, const std::string &message)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + message), line(line_),
      column(column_), detail(message) {}

namespace {

class Parser {
public:
  Parser(std::string_view text, const ParseOptions &options) : text_(text), options_(options) {}

  Expression run() {
    skip_space();
    if (at_end())
      fail("empty expression");
    Expression e = expr();
    skip_space();
    if (!at_end())
      fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

private:
  std::string_view text_;
  const ParseOptions &options_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail_at(std::size_t pos, const std::string &message) const {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(line, column, message);
  }
  [[noreturn]] void fail(const std::string &message) const { fail_at(pos_, message); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      fail(std::string("expected '") + c + "'");
  }

  Expression expr() {
    std::vector<Expression> terms{term()};
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(Expression::product({Expression(-1), term()}));
      else
        break;
    }
    return terms.size() == 1 ? terms.front() : Expression::sum(std::move(terms));
  }

  Expression term() {
    Expression acc = unary();
    for (;;) {
      if (accept('*')) {
        Expression rhs = unary();
        acc = append_factor(acc, rhs);
      } else if (accept('/')) {
        std::size_t where = pos_;
        Expression rhs = unary();
        if (rhs.normal_form().is_zero())
          fail_at(where, "division by zero");
        acc = append_factor(acc, Expression::power(rhs, -1));
      } else {
        break;
      }
    }
    return acc;
  }

  // Keeps a left-nested chain a*b*c as one product node.
  static Expression append_factor(const Expression &acc, const Expression &rhs) {
    if (acc.kind() == NodeKind::product) {
      auto kids = acc.children();
      kids.push_back(rhs);
      return Expression::product(std::move(kids));
    }
    return Expression::product({acc, rhs});
  }

  Expression unary() {
    if (accept('-')) {
      Expression inner = unary();
      if (inner.kind() == NodeKind::number)
        return Expression(-inner.value());
      return Expression::product({Expression(-1), inner});
    }
    if (accept('+'))
      return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    while (accept('^')) {
      skip_space();
      bool paren = accept('(');
      bool negative = accept('-');
      skip_space();
      std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
      if (start == pos_)
        fail("exponent must be an integer literal");
      std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 6)
        fail_at(start, "exponent too large");
      int k = std::stoi(digits);
      if (paren)
        expect(')');
      if (negative)
        k = -k;
      if (k < 0 && base.normal_form().is_zero())
        fail_at(start, "division by zero");
      base = Expression::power(base, k);
    }
    return base;
  }

  Expression primary() {
    skip_space();
    if (at_end())
      fail("unexpected end of input");
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  Expression number() {
    std::size_t start = pos_;
    std::string digits, frac;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      digits += text_[pos_++];
    if (peek() == '.') {
      ++pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        frac += text_[pos_++];
    }
    if (digits.empty() && frac.empty())
      fail_at(start, "malformed number");
    mpz_class numer(digits.empty() ? "0" : digits);
    mpz_class denom = 1;
    for (char d : frac) {
      numer = numer * 10 + (d - '0');
      denom *= 10;
    }
    mpq_class q(numer, denom);
    q.canonicalize();
    return Expression(q);
  }

  std::vector<Expression> arguments() {
    std::vector<Expression> args;
    if (accept(')'))
      return args;
    args.push_back(expr());
    while (accept(','))
      args.push_back(expr());
    expect(')');
    return args;
  }

  static std::optional<ElementaryFn> elementary_named(std::string_view name) {
    if (name == "sin")
      return ElementaryFn::sin;
    if (name == "cos")
      return ElementaryFn::cos;
    if (name == "exp")
      return ElementaryFn::exp;
    if (name == "log")
      return ElementaryFn::log;
    return std::nullopt;
  }

  // f__d1_0 -> (f, {1, 0})
  static std::optional<std::pair<Symbol, MultiIndex>> derivative_named(const std::string &name) {
    auto at = name.rfind("__d");
    if (at == std::string::npos || at == 0)
      return std::nullopt;
    auto f = SymbolTable::global().find(name.substr(0, at));
    if (!f || !f->is_function())
      return std::nullopt;
    MultiIndex alpha;
    std::string rest = name.substr(at + 3);
    std::size_t i = 0;
    while (i <= rest.size()) {
      std::size_t j = rest.find('_', i);
      if (j == std::string::npos)
        j = rest.size();
      std::string part = rest.substr(i, j - i);
      if (part.empty() || part.size() > 6 ||
          part.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
      alpha.push_back(std::stoi(part));
      i = j + 1;
    }
    if (static_cast<int>(alpha.size()) != f->arity())
      return std::nullopt;
    return std::make_pair(*f, alpha);
  }

  Expression identifier() {
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (peek() == '(') {
      ++pos_;
      if (auto fn = elementary_named(name)) {
        auto args = arguments();
        if (args.size() != 1)
          fail_at(start, name + " expects one argument");
        try {
          return Expression::elementary(*fn, args.front());
        } catch (const ExpressionError &e) {
          fail_at(start, e.what());
        }
      }
      std::optional<std::pair<Symbol, MultiIndex>> target;
      if (auto f = SymbolTable::global().find(name); f && f->is_function())
        target = std::make_pair(*f, MultiIndex{});
      else
        target = derivative_named(name);
      if (!target)
        fail_at(start, "unknown function '" + name + "'");
      auto args = arguments();
      try {
        return Expression::apply(target->first, std::move(args), target->second);
      } catch (const ExpressionError &e) {
        fail_at(start, e.what());
      }
    }
    if (elementary_named(name))
      fail_at(start, "'" + name + "' must be applied to an argument");
    auto s = SymbolTable::global().find(name);
    if (!s) {
      if (!options_.declare_unknown)
        fail_at(start, "unknown symbol '" + name + "'");
      try {
        s = SymbolTable::global().declare(name, options_.unknown_kind);
      } catch (const SymbolError &e) {
        fail_at(start, e.what());
      }
    }
    if (s->is_function())
      fail_at(start, "function '" + name + "' used without arguments");
    return Expression(*s);
  }
};

} // namespace

Expression parse(std::string_view text, const ParseOptions &options) { return Parser(text, options).run(); }

} // namespace klab
