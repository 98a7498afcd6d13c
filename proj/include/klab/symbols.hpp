#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace klab {

enum class SymbolKind { coordinate, parameter, function };

std::string_view to_string(SymbolKind kind);

/// Handle into the process-wide symbol table. Cheap to copy, compares by id.
class Symbol {
public:
  Symbol() = default;

  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != invalid; }
  const std::string &name() const;
  SymbolKind kind() const;
  /// Declared arity of a formal function symbol; 0 for coordinates and parameters.
  int arity() const;

  bool is_function() const { return kind() == SymbolKind::function; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

private:
  friend class SymbolTable;
  explicit Symbol(std::uint32_t id) : id_(id) {}
  static constexpr std::uint32_t invalid = 0xffffffffu;
  std::uint32_t id_ = invalid;
};

struct SymbolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Append-only registry of every symbol an Expression may mention.
/// Lookups and declarations are safe to call from several threads.
class SymbolTable {
public:
  static SymbolTable &global();

  /// Declares `name` or returns the existing symbol when kind and arity agree.
  Symbol declare(std::string_view name, SymbolKind kind, int arity = 0);
  std::optional<Symbol> find(std::string_view name) const;

  /// Returns an unused internal name starting with `stem` (never clashes with
  /// user identifiers, which may not contain a double underscore).
  Symbol fresh(std::string_view stem, SymbolKind kind, int arity = 0);

private:
  SymbolTable() = default;
  friend class Symbol;
  struct Impl;
  static Impl &impl();
};

Symbol coordinate(std::string_view name);
Symbol parameter(std::string_view name);
Symbol function_symbol(std::string_view name, int arity);

bool is_identifier(std::string_view text);
/// True when `name` is acceptable for a user declaration (identifier, no `__`).
bool is_user_identifier(std::string_view name);

} // namespace klab
