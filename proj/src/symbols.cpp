#include "klab/symbols.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace klab {

namespace {
struct Entry {
  std::string name;
  SymbolKind kind;
  int arity;
};
} // namespace

struct SymbolTable::Impl {
  mutable std::shared_mutex mutex;
  std::deque<Entry> entries; // deque keeps references stable on append
  std::unordered_map<std::string, std::uint32_t> by_name;
  std::uint64_t fresh_counter = 0;
};

SymbolTable::Impl &SymbolTable::impl() {
  static Impl instance;
  return instance;
}

SymbolTable &SymbolTable::global() {
  static SymbolTable table;
  return table;
}

std::string_view to_string(SymbolKind kind) {
  switch (kind) {
  case SymbolKind::coordinate: return "coordinate";
  case SymbolKind::parameter: return "parameter";
  case SymbolKind::function: return "function";
  }
  return "?";
}

const std::string &Symbol::name() const {
  auto &t = SymbolTable::impl();
  std::shared_lock lock(t.mutex);
  return t.entries.at(id_).name;
}

SymbolKind Symbol::kind() const {
  auto &t = SymbolTable::impl();
  std::shared_lock lock(t.mutex);
  return t.entries.at(id_).kind;
}

int Symbol::arity() const {
  auto &t = SymbolTable::impl();
  std::shared_lock lock(t.mutex);
  return t.entries.at(id_).arity;
}

Symbol SymbolTable::declare(std::string_view name, SymbolKind kind, int arity) {
  if (!is_identifier(name))
    throw SymbolError("invalid identifier '" + std::string(name) + "'");
  if (name == "sin" || name == "cos" || name == "exp" || name == "log")
    throw SymbolError("'" + std::string(name) + "' is a reserved function name");
  if (kind == SymbolKind::function && arity < 1)
    throw SymbolError("function symbol '" + std::string(name) + "' needs arity >= 1");
  if (kind != SymbolKind::function)
    arity = 0;
  auto &t = impl();
  std::unique_lock lock(t.mutex);
  if (auto it = t.by_name.find(std::string(name)); it != t.by_name.end()) {
    const Entry &e = t.entries[it->second];
    if (e.kind != kind || e.arity != arity)
      throw SymbolError("symbol '" + std::string(name) + "' already declared as " +
                        std::string(to_string(e.kind)) +
                        (e.kind == SymbolKind::function ? "/" + std::to_string(e.arity) : ""));
    return Symbol(it->second);
  }
  auto id = static_cast<std::uint32_t>(t.entries.size());
  t.entries.push_back(Entry{std::string(name), kind, arity});
  t.by_name.emplace(std::string(name), id);
  return Symbol(id);
}

std::optional<Symbol> SymbolTable::find(std::string_view name) const {
  auto &t = impl();
  std::shared_lock lock(t.mutex);
  if (auto it = t.by_name.find(std::string(name)); it != t.by_name.end())
    return Symbol(it->second);
  return std::nullopt;
}

Symbol SymbolTable::fresh(std::string_view stem, SymbolKind kind, int arity) {
  auto &t = impl();
  std::string name;
  {
    std::unique_lock lock(t.mutex);
    do {
      name = std::string(stem) + "__" + std::to_string(++t.fresh_counter);
    } while (t.by_name.count(name));
  }
  return declare(name, kind, arity);
}

Symbol coordinate(std::string_view name) {
  return SymbolTable::global().declare(name, SymbolKind::coordinate);
}
Symbol parameter(std::string_view name) {
  return SymbolTable::global().declare(name, SymbolKind::parameter);
}
Symbol function_symbol(std::string_view name, int arity) {
  return SymbolTable::global().declare(name, SymbolKind::function, arity);
}

bool is_identifier(std::string_view text) {
  if (text.empty())
    return false;
  auto c0 = static_cast<unsigned char>(text[0]);
  if (!(std::isalpha(c0) || c0 == '_'))
    return false;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_'))
      return false;
  }
  return true;
}

bool is_user_identifier(std::string_view name) {
  return is_identifier(name) && name.find("__") == std::string_view::npos;
}

} // namespace klab
