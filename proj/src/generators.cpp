#include "klab/generators.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace klab {

std::string_view to_string(ElementaryFn fn) {
  switch (fn) {
  case ElementaryFn::sin: return "sin";
  case ElementaryFn::cos: return "cos";
  case ElementaryFn::exp: return "exp";
  case ElementaryFn::log: return "log";
  }
  return "?";
}

namespace generators {

namespace {
struct Table {
  std::shared_mutex mutex;
  std::deque<GeneratorInfo> entries;
  std::unordered_map<std::string, GenId> by_key;
  std::unordered_map<std::uint32_t, GenId> by_symbol;
};

Table &table() {
  static Table t;
  return t;
}

std::vector<Symbol> collect_dependencies(const std::vector<RationalFunction> &args) {
  std::vector<Symbol> deps;
  for (const auto &a : args)
    for (GenId g : a.generators()) {
      const auto &d = info(g).depends_on;
      deps.insert(deps.end(), d.begin(), d.end());
    }
  std::sort(deps.begin(), deps.end());
  deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
  return deps;
}

GenId intern(GeneratorInfo gi) {
  auto &t = table();
  std::unique_lock lock(t.mutex);
  if (auto it = t.by_key.find(gi.key); it != t.by_key.end())
    return it->second;
  auto id = static_cast<GenId>(t.entries.size());
  t.by_key.emplace(gi.key, id);
  if (gi.kind == GenKind::symbol)
    t.by_symbol.emplace(gi.symbol.id(), id);
  t.entries.push_back(std::move(gi));
  return id;
}
} // namespace

GenId of_symbol(Symbol s) {
  if (s.is_function())
    throw SymbolError("function symbol '" + s.name() + "' used as a variable");
  {
    auto &t = table();
    std::shared_lock lock(t.mutex);
    if (auto it = t.by_symbol.find(s.id()); it != t.by_symbol.end())
      return it->second;
  }
  GeneratorInfo gi{GenKind::symbol, s, {}, {}, {}, s.name(), {s}};
  return intern(std::move(gi));
}

std::string derivative_name(Symbol f, const MultiIndex &derivative) {
  bool any = std::any_of(derivative.begin(), derivative.end(), [](int k) { return k > 0; });
  if (!any)
    return f.name();
  std::string out = f.name() + "__d";
  for (std::size_t i = 0; i < derivative.size(); ++i) {
    if (i)
      out += '_';
    out += std::to_string(derivative[i]);
  }
  return out;
}

GenId formal(Symbol f, MultiIndex derivative, std::vector<RationalFunction> args) {
  if (!f.is_function())
    throw SymbolError("'" + f.name() + "' is not a function symbol");
  if (static_cast<int>(args.size()) != f.arity())
    throw SymbolError("function '" + f.name() + "' expects " + std::to_string(f.arity()) + " argument(s)");
  if (derivative.empty())
    derivative.assign(args.size(), 0);
  std::string key = derivative_name(f, derivative) + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i)
      key += ", ";
    key += format(args[i]);
  }
  key += ")";
  auto deps = collect_dependencies(args);
  GeneratorInfo gi{GenKind::formal, f, std::move(derivative), {}, std::move(args), std::move(key), std::move(deps)};
  return intern(std::move(gi));
}

GenId elementary(ElementaryFn fn, RationalFunction arg) {
  std::string key = std::string(to_string(fn)) + "(" + format(arg) + ")";
  std::vector<RationalFunction> args{std::move(arg)};
  auto deps = collect_dependencies(args);
  GeneratorInfo gi{GenKind::elementary, Symbol{}, {}, fn, std::move(args), std::move(key), std::move(deps)};
  return intern(std::move(gi));
}

const GeneratorInfo &info(GenId g) {
  auto &t = table();
  std::shared_lock lock(t.mutex);
  return t.entries.at(g);
}

int compare(GenId a, GenId b) {
  if (a == b)
    return 0;
  int c = info(a).key.compare(info(b).key);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

namespace {
Monomial by_name(const Monomial &m) {
  Monomial out = m;
  std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return compare(x.first, y.first) < 0; });
  return out;
}
} // namespace

// Lex order where a name earlier in the alphabet is the more significant variable.
int compare(const Monomial &a0, const Monomial &b0) {
  Monomial a = by_name(a0), b = by_name(b0);
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) {
    if (a[i].first != b[i].first)
      return compare(a[i].first, b[i].first) < 0 ? 1 : -1;
    if (a[i].second != b[i].second)
      return a[i].second > b[i].second ? 1 : -1;
  }
  if (a.size() == b.size())
    return 0;
  return i < a.size() ? 1 : -1;
}

} // namespace generators
} // namespace klab
