#include "klab/scene.hpp"

#include "klab/groupoid.hpp"
#include "klab/parser.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace klab {

SceneError::SceneError(std::string where_, const std::string &message)
    : std::runtime_error(where_.empty() ? message : where_ + ": " + message), where(std::move(where_)) {}

bool Report::passed() const {
  for (const auto &e : entries)
    if (e.verdict == Verdict::fail)
      return false;
  return true;
}

namespace {

using Json = nlohmann::ordered_json;
using Images = std::vector<RationalFunction>;

// Name of the directive being run or the stanza being read, for messages.
struct Where {
  std::string path;
  Where operator/(const std::string &field) const { return {path.empty() ? field : path + "." + field}; }
};

[[noreturn]] void invalid(const Where &w, const std::string &message) { throw SceneError(w.path, message); }

const Json &field(const Json &obj, const std::string &key, const Where &w) {
  if (!obj.is_object())
    invalid(w, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    invalid(w, "missing field '" + key + "'");
  return *it;
}

std::string string_field(const Json &obj, const std::string &key, const Where &w) {
  const Json &v = field(obj, key, w);
  if (!v.is_string())
    invalid(w / key, "expected a string");
  return v.get<std::string>();
}

std::string string_or(const Json &obj, const std::string &key, const std::string &fallback, const Where &w) {
  if (!obj.contains(key))
    return fallback;
  return string_field(obj, key, w);
}

int int_or(const Json &obj, const std::string &key, int fallback, const Where &w) {
  if (!obj.contains(key))
    return fallback;
  const Json &v = obj.at(key);
  if (!v.is_number_integer())
    invalid(w / key, "expected an integer");
  return v.get<int>();
}

std::vector<std::string> string_list(const Json &v, const Where &w) {
  if (!v.is_array())
    invalid(w, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto &e : v) {
    if (!e.is_string())
      invalid(w, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void require_user_name(const std::string &name, const Where &w) {
  if (!is_user_identifier(name))
    invalid(w, "'" + name + "' is not a valid identifier (letters, digits, single underscores)");
  if (name.rfind("d_", 0) == 0 || name.rfind("p_", 0) == 0)
    invalid(w, "'" + name + "' uses a reserved prefix (d_ and p_ name lifted coordinates)");
}

RationalFunction expr(const Json &v, const Where &w) {
  std::string text;
  if (v.is_string())
    text = v.get<std::string>();
  else if (v.is_number_integer())
    text = std::to_string(v.get<long long>());
  else
    invalid(w, "expected an expression string");
  try {
    return parse(text).normal_form();
  } catch (const ParseError &e) {
    invalid(w, std::to_string(e.line) + ":" + std::to_string(e.column) + ": " + e.detail);
  } catch (const std::exception &e) {
    invalid(w, e.what());
  }
}

Images expr_list(const Json &v, const Where &w) {
  if (!v.is_array())
    invalid(w, "expected an array of expressions");
  Images out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(expr(v[i], w / std::to_string(i)));
  return out;
}

std::string verdict_name(Verdict v) { return std::string(to_string(v)); }

Certificate from_zero(std::string name, const ZeroVerdict &v, std::string detail = {}) {
  Certificate c;
  c.name = std::move(name);
  c.witnesses = v.witnesses;
  c.detail = std::move(detail);
  if (!v.is_zero())
    c.verdict = Verdict::fail;
  else
    c.verdict = v.is_proved() ? Verdict::proved : Verdict::numeric_pass;
  return c;
}

Certificate degree_certificate(const HomogeneityReport &h, int k) {
  std::string name = std::string("degree ") + (k > 0 ? "+" : "") + std::to_string(k);
  if (h.homogeneous_of(k))
    return Certificate{name, h.finite.verdict, h.describe(), {}};
  return fail(name, h.describe());
}

std::string join(const std::vector<std::string> &v, const std::string &sep = ", ") {
  std::string out;
  for (const auto &s : v)
    out += (out.empty() ? "" : sep) + s;
  return out;
}

std::string images_text(const Images &v) {
  std::vector<std::string> s;
  for (const auto &r : v)
    s.push_back(format(r));
  return "(" + join(s) + ")";
}

std::string coords_text(const Chart &c) { return "(" + join(c.names()) + ")"; }

// ---------------------------------------------------------------------------
// Scene state

struct Scene {
  std::map<std::string, Chart> charts;
  std::map<std::string, Multivector> multivectors;
  std::map<std::string, DifferentialForm> forms;
  std::map<std::string, RationalFunction> functions;
  std::map<std::string, JacobiPair> pairs;
  std::map<std::string, RxAction> actions;
  std::map<std::string, CoordGroupoid> groupoids;
  std::map<std::string, CotangentGroupoid> cotangents;
  std::map<std::string, HomogeneousSymplectic> symplectic;
  std::map<std::string, KirillovStructure> structures;
  std::set<std::string> names;

  void claim(const std::string &name, const Where &w) {
    if (!is_identifier(name) || name.find("__") != std::string::npos)
      invalid(w, "'" + name + "' is not a valid name");
    if (!names.insert(name).second)
      invalid(w, "name '" + name + "' is already defined");
  }

  template <class T> const T &lookup(const std::map<std::string, T> &m, const std::string &name, const char *what,
                                     const Where &w) const {
    auto it = m.find(name);
    if (it == m.end())
      invalid(w, std::string("no ") + what + " named '" + name + "'");
    return it->second;
  }
  const Chart &chart(const std::string &n, const Where &w) const { return lookup(charts, n, "chart", w); }
  const Multivector &multivector(const std::string &n, const Where &w) const {
    return lookup(multivectors, n, "multivector", w);
  }
  const DifferentialForm &form(const std::string &n, const Where &w) const { return lookup(forms, n, "form", w); }
  const JacobiPair &pair(const std::string &n, const Where &w) const { return lookup(pairs, n, "Jacobi pair", w); }
  const RxAction &action(const std::string &n, const Where &w) const { return lookup(actions, n, "action", w); }
  const CoordGroupoid &groupoid(const std::string &n, const Where &w) const {
    return lookup(groupoids, n, "groupoid", w);
  }
  const CotangentGroupoid &cotangent(const std::string &n, const Where &w) const {
    return lookup(cotangents, n, "cotangent groupoid", w);
  }
  const KirillovStructure &structure(const std::string &n, const Where &w) const {
    return lookup(structures, n, "Kirillov structure", w);
  }
};

void read_symbols(const Json &doc, const Where &w) {
  if (!doc.contains("symbols"))
    return;
  const Json &s = doc.at("symbols");
  if (!s.is_object())
    invalid(w / "symbols", "expected an object");
  for (const auto &[key, value] : s.items()) {
    Where here = w / "symbols" / key;
    if (key == "coordinates" || key == "parameters") {
      for (const auto &name : string_list(value, here)) {
        require_user_name(name, here);
        try {
          key == "coordinates" ? coordinate(name) : parameter(name);
        } catch (const std::exception &e) {
          invalid(here, e.what());
        }
      }
    } else if (key == "functions") {
      if (!value.is_object())
        invalid(here, "expected an object of name: arity");
      for (const auto &[name, arity] : value.items()) {
        require_user_name(name, here / name);
        if (!arity.is_number_integer() || arity.get<int>() < 0)
          invalid(here / name, "arity must be a non-negative integer");
        try {
          function_symbol(name, arity.get<int>());
        } catch (const std::exception &e) {
          invalid(here / name, e.what());
        }
      }
    } else {
      invalid(here, "unknown symbol section (expected coordinates, parameters or functions)");
    }
  }
}

void read_charts(Scene &sc, const Json &doc, const Where &w) {
  if (!doc.contains("charts"))
    return;
  for (const auto &[name, spec] : doc.at("charts").items()) {
    Where here = w / "charts" / name;
    sc.claim(name, here);
    std::vector<std::string> coords = string_list(field(spec, "coords", here), here / "coords");
    for (const auto &c : coords)
      require_user_name(c, here / "coords");
    std::optional<std::string> fiber;
    if (spec.contains("fiber") && !spec.at("fiber").is_null())
      fiber = string_field(spec, "fiber", here);
    try {
      Chart c = Chart::of(name, coords, fiber);
      sc.charts.emplace(name, std::move(c));
    } catch (const std::exception &e) {
      invalid(here, e.what());
    }
  }
}

std::vector<Symbol> legs(const std::string &key, const Chart &chart, const Where &w) {
  std::vector<Symbol> out;
  std::string token;
  std::istringstream is(key);
  while (std::getline(is, token, ' ')) {
    std::string clean;
    for (char ch : token)
      if (ch != ',')
        clean += ch;
    if (clean.empty())
      continue;
    int i = chart.index_of(clean);
    if (i < 0)
      invalid(w, "'" + clean + "' is not a coordinate of chart '" + chart.name() + "'");
    out.push_back(chart[i]);
  }
  return out;
}

template <TensorKind K> Alternating<K> read_alternating(const Chart &chart, int degree, const Json &comps,
                                                        const Where &w) {
  Alternating<K> T(chart, degree);
  if (!comps.is_object())
    invalid(w, "expected an object of components");
  for (const auto &[key, value] : comps.items()) {
    std::vector<Symbol> l = legs(key, chart, w / key);
    if (static_cast<int>(l.size()) != degree)
      invalid(w / key, "component has " + std::to_string(l.size()) + " legs, degree is " + std::to_string(degree));
    std::set<Symbol> distinct(l.begin(), l.end());
    if (distinct.size() != l.size())
      invalid(w / key, "repeated leg");
    T = T + [&] {
      Alternating<K> one(chart, degree);
      one.set_component(l, Expression::from_normal_form(expr(value, w / key)));
      return one;
    }();
  }
  return T;
}

void read_tensors(Scene &sc, const Json &doc, const Where &w) {
  if (!doc.contains("tensors"))
    return;
  for (const auto &[name, spec] : doc.at("tensors").items()) {
    Where here = w / "tensors" / name;
    sc.claim(name, here);
    const Chart &chart = sc.chart(string_field(spec, "chart", here), here / "chart");
    std::string kind = string_field(spec, "kind", here);
    if (kind == "function") {
      sc.functions.emplace(name, expr(field(spec, "value", here), here / "value"));
      continue;
    }
    int degree = int_or(spec, "degree", -1, here);
    if (degree < 0)
      invalid(here / "degree", "a non-negative degree is required");
    const Json empty = Json::object();
    const Json &comps = spec.contains("components") ? spec.at("components") : empty;
    if (kind == "multivector" || kind == "bivector" || kind == "vector")
      sc.multivectors.emplace(name, read_alternating<TensorKind::multivector>(chart, degree, comps, here / "components"));
    else if (kind == "form")
      sc.forms.emplace(name, read_alternating<TensorKind::form>(chart, degree, comps, here / "components"));
    else
      invalid(here / "kind", "unknown tensor kind '" + kind + "' (multivector, form or function)");
  }
}

void read_pairs(Scene &sc, const Json &doc, const Where &w) {
  if (!doc.contains("pairs"))
    return;
  for (const auto &[name, spec] : doc.at("pairs").items()) {
    Where here = w / "pairs" / name;
    sc.claim(name, here);
    try {
      if (spec.contains("bivector")) {
        const Multivector &b = sc.multivector(string_field(spec, "bivector", here), here / "bivector");
        Multivector f = spec.contains("field") ? sc.multivector(string_field(spec, "field", here), here / "field")
                                               : Multivector(b.chart(), 1);
        sc.pairs.emplace(name, JacobiPair(b, f));
      } else {
        sc.pairs.emplace(name, JacobiPair::zero(sc.chart(string_field(spec, "base", here), here / "base")));
      }
    } catch (const SceneError &) {
      throw;
    } catch (const std::exception &e) {
      invalid(here, e.what());
    }
  }
}

void read_actions(Scene &sc, const Json &doc, const Where &w, const ZeroOptions &z) {
  if (!doc.contains("actions"))
    return;
  for (const auto &[name, spec] : doc.at("actions").items()) {
    Where here = w / "actions" / name;
    sc.claim(name, here);
    const Chart &chart = sc.chart(string_field(spec, "chart", here), here / "chart");
    Symbol s = parameter(string_or(spec, "parameter", "s", here));
    try {
      if (spec.contains("images"))
        sc.actions.emplace(name, RxAction(chart, s, expr_list(spec.at("images"), here / "images"), z));
      else
        sc.actions.emplace(name, RxAction::fiber_scaling(chart, s));
    } catch (const std::exception &e) {
      invalid(here, e.what());
    }
  }
}

void read_groupoids(Scene &sc, const Json &doc, const Where &w, const ZeroOptions &z) {
  if (!doc.contains("groupoids"))
    return;
  for (const auto &[name, spec] : doc.at("groupoids").items()) {
    Where here = w / "groupoids" / name;
    sc.claim(name, here);
    std::string kind = string_field(spec, "kind", here);
    try {
      if (kind == "pair") {
        sc.groupoids.emplace(name, pair_groupoid(int_or(spec, "n", 1, here)));
      } else if (kind == "multiplicative") {
        sc.groupoids.emplace(name, multiplicative_group(string_or(spec, "coordinate", "r", here)));
      } else if (kind == "lie_group") {
        sc.groupoids.emplace(name, lie_group(name, string_list(field(spec, "coords", here), here / "coords"),
                                             expr_list(field(spec, "identity", here), here / "identity"),
                                             expr_list(field(spec, "mult", here), here / "mult"),
                                             expr_list(field(spec, "inverse", here), here / "inverse")));
      } else if (kind == "unit") {
        sc.groupoids.emplace(name, unit_groupoid(sc.chart(string_field(spec, "chart", here), here / "chart")));
      } else if (kind == "product") {
        auto f = string_list(field(spec, "factors", here), here / "factors");
        if (f.empty())
          invalid(here / "factors", "at least one factor is required");
        bool cot = sc.cotangents.count(f[0]) > 0;
        if (cot) {
          CotangentGroupoid c = sc.cotangent(f[0], here / "factors");
          for (std::size_t i = 1; i < f.size(); ++i)
            c = product(c, sc.cotangent(f[i], here / "factors"));
          sc.groupoids.emplace(name, c.groupoid);
          sc.cotangents.emplace(name, std::move(c));
        } else {
          CoordGroupoid g = sc.groupoid(f[0], here / "factors");
          for (std::size_t i = 1; i < f.size(); ++i)
            g = product(g, sc.groupoid(f[i], here / "factors"));
          sc.groupoids.emplace(name, std::move(g));
        }
      } else if (kind == "tangent") {
        sc.groupoids.emplace(name, tangent_groupoid(sc.groupoid(string_field(spec, "of", here), here / "of")));
      } else if (kind == "split") {
        const CoordGroupoid &base = sc.groupoid(string_field(spec, "base", here), here / "base");
        SplitGroupoid s = trivial_split(base, expr(field(spec, "cocycle", here), here / "cocycle"),
                                        string_or(spec, "fiber", "g", here), string_or(spec, "parameter", "s", here), z);
        sc.groupoids.emplace(name, s.groupoid);
        sc.actions.emplace(name + ".action", s.arrows_action);
      } else if (kind == "cotangent_pair") {
        CotangentGroupoid c = cotangent_groupoid_pair(int_or(spec, "n", 1, here), string_or(spec, "parameter", "s", here));
        sc.groupoids.emplace(name, c.groupoid);
        sc.cotangents.emplace(name, std::move(c));
      } else if (kind == "cotangent_group") {
        CotangentGroupoid c = cotangent_group(sc.groupoid(string_field(spec, "group", here), here / "group"),
                                              string_or(spec, "parameter", "s", here));
        sc.groupoids.emplace(name, c.groupoid);
        sc.cotangents.emplace(name, std::move(c));
      } else if (kind == "modified") {
        const CoordGroupoid &base = sc.groupoid(string_field(spec, "base", here), here / "base");
        GroupoidMaps m = base.maps();
        const Json &maps = field(spec, "maps", here);
        std::map<std::string, Images *> slots{{"source", &m.source}, {"target", &m.target}, {"unit", &m.unit},
                                              {"inverse", &m.inverse}, {"pr1", &m.pr1},     {"pr2", &m.pr2},
                                              {"mult", &m.mult},       {"q1", &m.q1},       {"q2", &m.q2},
                                              {"q3", &m.q3}};
        for (const auto &[key, value] : maps.items()) {
          auto it = slots.find(key);
          if (it == slots.end())
            invalid(here / "maps" / key, "unknown structure map");
          *it->second = expr_list(value, here / "maps" / key);
        }
        sc.groupoids.emplace(name, CoordGroupoid(name, base.arrows(), base.units(), base.pairs(), base.triples(), m));
      } else {
        invalid(here / "kind", "unknown groupoid kind '" + kind + "'");
      }
    } catch (const SceneError &) {
      throw;
    } catch (const std::exception &e) {
      invalid(here, e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Directives

struct Context {
  Scene &scene;
  ZeroOptions zero;
  int samples;
};

struct Entry {
  ReportEntry e;
  // Stores named results in the scene; run after the entry, sequentially.
  std::function<void(Scene &)> store;
  void check(Certificate c) { e.checks.push_back(std::move(c)); }
  void out(std::string k, std::string v) { e.output.emplace_back(std::move(k), std::move(v)); }
};

using Handler = std::function<void(Entry &, const Json &, const Where &, const Context &)>;

struct DirectiveInfo {
  Handler run;
  std::string explanation;
  /// Fields naming the directive's main input, for the report.
  std::vector<std::string> target_fields;
};

HomogeneousSymplectic resolve_symplectic(const Json &d, const Where &w, const Context &c) {
  if (d.contains("symplectic"))
    return c.scene.lookup(c.scene.symplectic, string_field(d, "symplectic", w), "symplectic structure", w / "symplectic");
  const DifferentialForm &omega = c.scene.form(string_field(d, "form", w), w / "form");
  const RxAction &h = c.scene.action(string_field(d, "action", w), w / "action");
  return homogeneous_symplectic(omega, h, c.zero);
}

void store_as(Entry &en, const Json &d, const Where &w, std::function<void(Scene &, const std::string &)> f) {
  if (!d.contains("as"))
    return;
  std::string name = string_field(d, "as", w);
  en.store = [name, f, w](Scene &sc) {
    sc.claim(name, w / "as");
    f(sc, name);
  };
}

void add_all(Entry &en, const std::vector<Certificate> &cs) {
  for (const auto &c : cs)
    en.check(c);
}

void symplectise_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const DifferentialForm &alpha = c.scene.form(string_field(d, "form", w), w / "form");
  HomogeneousSymplectic H =
      symplectise(alpha, string_or(d, "fiber", "t", w), string_or(d, "parameter", "s", w), c.zero);
  en.check(H.closed);
  en.check(H.nondegeneracy.nondegenerate() ? H.nondegeneracy.nonvanishing : fail("det != 0", H.nondegeneracy.reason));
  en.check(degree_certificate(H.homogeneity, 1));
  en.out("chart", coords_text(H.total));
  en.out("omega", H.omega.to_string());
  en.out("determinant", format(H.nondegeneracy.determinant));
  store_as(en, d, w, [H](Scene &sc, const std::string &n) { sc.symplectic.emplace(n, H); });
}

void contact_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const DifferentialForm &alpha = c.scene.form(string_field(d, "form", w), w / "form");
  ContactReport r = is_contact_form(alpha, c.zero);
  en.check(r.nonvanishing);
  en.check(r.symplectic.nondegenerate() ? r.symplectic.nonvanishing
                                        : fail("symplectisation nondegenerate", r.symplectic.reason.empty()
                                                                                    ? "determinant vanishes"
                                                                                    : r.symplectic.reason));
  en.check(r.volume);
  en.check(r.agree() ? pass("criteria agree") : fail("criteria agree", "symplectic and volume criteria disagree"));
  en.out("n", std::to_string(r.n));
  en.out("symplectisation determinant", format(r.symplectic.determinant));
  en.out("volume coefficient", format(r.volume_coefficient));
}

void recover_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  HomogeneousSymplectic H = resolve_symplectic(d, w, c);
  RecoveryReport r = recover_alpha(H, c.zero);
  en.check(r.preconditions);
  en.check(r.basic);
  en.out("contraction", r.contraction.to_string());
  if (r.alpha)
    en.out("alpha", r.alpha->to_string());
  if (d.contains("expect")) {
    const DifferentialForm &want = c.scene.form(string_field(d, "expect", w), w / "expect");
    if (!r.alpha) {
      en.check(fail("recovered alpha equals expected", "nothing recovered"));
    } else if (!r.alpha->chart().same_coordinates(want.chart()) || r.alpha->degree() != want.degree()) {
      en.check(fail("recovered alpha equals expected", "charts differ: " + coords_text(r.alpha->chart()) + " vs " +
                                                           coords_text(want.chart())));
    } else {
      DifferentialForm diff = r.alpha->on_chart(want.chart()) - want;
      std::vector<std::pair<std::string, RationalFunction>> res;
      for (const auto &[I, v] : diff.components())
        res.emplace_back(diff.label(I), v);
      en.check(certify_all_zero("recovered alpha equals expected", res, c.zero));
      bool same = r.alpha->on_chart(want.chart()).to_string() == want.to_string();
      en.check(same ? pass("printed forms agree")
                    : fail("printed forms agree", r.alpha->to_string() + " vs " + want.to_string()));
    }
  }
}

void embed_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  HomogeneousSymplectic H = resolve_symplectic(d, w, c);
  EmbeddingReport r = psi_embedding(H, c.zero);
  en.check(r.preconditions);
  en.check(r.basic);
  en.check(r.pullback);
  en.out("eta", r.eta.to_string());
  if (r.psi)
    en.out("psi", r.psi->to_string());
}

void jacobi_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const JacobiPair &p = c.scene.pair(string_field(d, "pair", w), w / "pair");
  JacobiReport r = is_jacobi(p, c.zero);
  en.check(from_zero("[Lambda, Lambda] = 0 after poissonisation", r.verdict));
  en.out("residual", r.residual.to_string());
  en.out("bivector residual", r.base_residual.to_string());
  for (const auto &[I, v] : r.base_residual.components())
    en.e.witnesses.push_back(r.base_residual.label(I) + " = " + format(v));
}

void structure_checks(Entry &en, const KirillovStructure &k) {
  en.check(k.poisson);
  en.check(degree_certificate(k.homogeneity, -1));
  en.out("lambda", k.lambda.to_string());
  if (!k.jacobiator.is_zero())
    en.out("jacobiator", k.jacobiator.to_string());
}

void poissonise_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const JacobiPair &p = c.scene.pair(string_field(d, "pair", w), w / "pair");
  KirillovStructure k = poissonise(p, string_or(d, "fiber", "t", w), string_or(d, "parameter", "s", w), c.zero);
  structure_checks(en, k);
  en.out("chart", coords_text(k.total));
  store_as(en, d, w, [k](Scene &sc, const std::string &n) { sc.structures.emplace(n, k); });
}

void kirillov_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const Multivector &L = c.scene.multivector(string_field(d, "bivector", w), w / "bivector");
  if (L.degree() != 2)
    invalid(w / "bivector", "expected a bivector");
  if (!L.chart().fiber())
    invalid(w / "bivector", "chart '" + L.chart().name() + "' has no fiber coordinate");
  KirillovStructure k = kirillov_structure(L, parameter(string_or(d, "parameter", "s", w)), c.zero);
  structure_checks(en, k);
  store_as(en, d, w, [k](Scene &sc, const std::string &n) { sc.structures.emplace(n, k); });
}

void coisotropic_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const KirillovStructure &k = c.scene.structure(string_field(d, "structure", w), w / "structure");
  std::vector<Symbol> vanishing;
  for (const auto &n : string_list(field(d, "vanishing", w), w / "vanishing")) {
    int i = k.total.index_of(n);
    if (i < 0)
      invalid(w / "vanishing", "'" + n + "' is not a coordinate of " + coords_text(k.total));
    vanishing.push_back(k.total[i]);
  }
  CoisotropicReport r = coisotropic_check(k, vanishing, c.zero);
  en.check(r.bivector_block);
  en.check(r.field_block);
}

void e1_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const JacobiPair &p = c.scene.pair(string_field(d, "pair", w), w / "pair");
  E1Report r = check_e1(p, expr(field(d, "u", w), w / "u"), expr(field(d, "v", w), w / "v"), c.zero);
  en.check(from_zero("iota[u, v] = {iota u, iota v}", r.verdict));
  en.out("lhs", format(r.lhs));
  en.out("rhs", format(r.rhs));
}

void algebroid_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const KirillovStructure &k = c.scene.structure(string_field(d, "structure", w), w / "structure");
  TangentAlgebroid a = tangent_algebroid(k, c.zero);
  add_all(en, a.report.checks);
  en.out("lifted", a.lifted.to_string());
  en.out("adapted", a.adapted.to_string());
  if (!a.report.failed_block.empty())
    en.out("failed block", a.report.failed_block);
  for (const auto &[key, v] : a.report.mixed)
    en.out("mixed(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")", format(v));
  for (const auto &[key, v] : a.report.linear)
    en.out("linear(" + std::to_string(std::get<0>(key)) + "," + std::to_string(std::get<1>(key)) + "," +
               std::to_string(std::get<2>(key)) + ")",
           format(v));
  for (const auto &[i, v] : a.report.anchor)
    en.out("anchor(" + std::to_string(i) + ")", format(v));
}

void intertwine_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const Multivector &L = c.scene.multivector(string_field(d, "bivector", w), w / "bivector");
  const RxAction &h = c.scene.action(string_field(d, "action", w), w / "action");
  IntertwineReport r = intertwine_check(L, h, c.zero);
  en.check(r.equality);
  en.check(degree_certificate(r.homogeneity, -1));
  en.out("Th o sharp", images_text(r.tangent_after_sharp));
  en.out("sharp o T*h", images_text(r.sharp_after_phase));
  en.out("residual", images_text(r.residual));
}

void lifted_action(Entry &en, const Json &d, const Where &w, const Context &c, bool tangent) {
  const RxAction &h = c.scene.action(string_field(d, "action", w), w / "action");
  int k = int_or(d, "k", 0, w);
  RxAction lifted = tangent ? tangent_action(h, k, c.zero) : phase_action(h, k, c.zero);
  en.check(lifted.identity_certificate());
  en.check(lifted.group_law_certificate());
  en.out("chart", coords_text(lifted.chart()));
  en.out("images", images_text(lifted.images()));
  en.out("euler", lifted.euler().to_string());
  store_as(en, d, w, [lifted](Scene &sc, const std::string &n) { sc.actions.emplace(n, lifted); });
}

void lift_bivector_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const Multivector &P = c.scene.multivector(string_field(d, "bivector", w), w / "bivector");
  Multivector lifted = tangent_lift(P);
  Multivector lhs = schouten(lifted, lifted);
  Multivector rhs = tangent_lift(schouten(P, P));
  en.check(from_zero("[dT P, dT P] = dT [P, P]", tensor_is_zero(lhs - rhs, c.zero)));
  en.out("chart", coords_text(lifted.chart()));
  en.out("lift", lifted.to_string());
  store_as(en, d, w, [lifted](Scene &sc, const std::string &n) { sc.multivectors.emplace(n, lifted); });
}

void cocycle_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const CoordGroupoid &G = c.scene.groupoid(string_field(d, "groupoid", w), w / "groupoid");
  CocycleReport r = cocycle_check(G, expr(field(d, "b", w), w / "b"), c.zero);
  en.check(r.nonvanishing);
  en.check(r.multiplicative);
}

void build_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const CoordGroupoid &G = c.scene.groupoid(string_field(d, "groupoid", w), w / "groupoid");
  const GroupoidMaps &m = G.maps();
  en.check(pass("structure maps constructed"));
  en.out("arrows", coords_text(G.arrows()));
  en.out("units", coords_text(G.units()));
  en.out("pairs", coords_text(G.pairs()));
  en.out("source", images_text(m.source));
  en.out("target", images_text(m.target));
  en.out("unit", images_text(m.unit));
  en.out("inverse", images_text(m.inverse));
  en.out("pr1", images_text(m.pr1));
  en.out("pr2", images_text(m.pr2));
  en.out("mult", images_text(m.mult));
}

void verify_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const CoordGroupoid &G = c.scene.groupoid(string_field(d, "groupoid", w), w / "groupoid");
  GroupoidReport r = verify_groupoid(G, c.zero);
  add_all(en, r.axioms);
  if (!r.passed())
    en.out("failed axioms", join(r.failed(), "; "));
}

void split_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  const CoordGroupoid &base = c.scene.groupoid(string_field(d, "base", w), w / "base");
  SplitGroupoid s = trivial_split(base, expr(field(d, "cocycle", w), w / "cocycle"), string_or(d, "fiber", "g", w),
                                  string_or(d, "parameter", "s", w), c.zero);
  if (s.cocycle) {
    en.check(s.cocycle->nonvanishing);
    en.check(s.cocycle->multiplicative);
  }
  add_all(en, s.action.certificates());
  add_all(en, s.axioms.axioms);
  add_all(en, s.morphism.certificates());
  SplittingReport sp = splitting_map_check(s, std::nullopt, std::nullopt, c.zero);
  add_all(en, {sp.freeness, sp.invariance, sp.fibered, sp.left_inverse, sp.right_inverse});
  en.out("arrows", coords_text(s.groupoid.arrows()));
  en.out("target", images_text(s.groupoid.maps().target));
  en.out("base action", images_text(s.morphism.base_action));
  if (!s.axioms.passed())
    en.out("failed axioms", join(s.axioms.failed(), "; "));
  store_as(en, d, w, [s](Scene &sc, const std::string &n) {
    sc.groupoids.emplace(n, s.groupoid);
    sc.actions.emplace(n + ".action", s.arrows_action);
  });
}

void sample_checks(Entry &en, const CotangentGroupoid &cot, const Context &c) {
  GroupoidReport r = verify_groupoid(cot.groupoid, c.zero);
  en.check(combine("groupoid axioms", r.axioms));
  en.check(pairing_multiplicativity_check(cot, tangent_groupoid(cot.base), c.samples, c.zero).certificate);
  en.check(multiplicative_form_check(cot.groupoid, cot.omega, c.samples, c.zero).certificate);
  en.check(degree_certificate(homogeneity_degree(cot.omega, cot.scaling, c.zero), 1));
  en.check(closure_check(cot, c.samples, c.zero).certificate);
  if (!r.passed())
    en.out("failed axioms", join(r.failed(), "; "));
}

void cotangent_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  CotangentGroupoid cot;
  std::string param = string_or(d, "parameter", "s", w);
  if (d.contains("group"))
    cot = cotangent_group(c.scene.groupoid(string_field(d, "group", w), w / "group"), param);
  else if (d.contains("groupoid"))
    cot = c.scene.cotangent(string_field(d, "groupoid", w), w / "groupoid");
  else
    cot = cotangent_groupoid_pair(int_or(d, "n", 1, w), param);
  sample_checks(en, cot, c);
  en.out("arrows", coords_text(cot.groupoid.arrows()));
  en.out("omega", cot.omega.to_string());
  en.out("source", images_text(cot.groupoid.maps().source));
  en.out("target", images_text(cot.groupoid.maps().target));
  store_as(en, d, w, [cot](Scene &sc, const std::string &n) {
    sc.groupoids.emplace(n, cot.groupoid);
    sc.cotangents.emplace(n, cot);
  });
}

void multiplicative_dir(Entry &en, const Json &d, const Where &w, const Context &c) {
  std::string g = string_field(d, "groupoid", w);
  if (d.contains("form")) {
    const CoordGroupoid &G = c.scene.groupoid(g, w / "groupoid");
    const DifferentialForm &omega = c.scene.form(string_field(d, "form", w), w / "form");
    if (omega.degree() != 2 || !omega.chart().same_coordinates(G.arrows()))
      invalid(w / "form", "expected a 2-form on the arrow chart " + coords_text(G.arrows()));
    en.check(multiplicative_form_check(G, omega, c.samples, c.zero).certificate);
  } else {
    const CotangentGroupoid &cot = c.scene.cotangent(g, w / "groupoid");
    en.check(multiplicative_form_check(cot.groupoid, cot.omega, c.samples, c.zero).certificate);
  }
}

void dazord_dir(Entry &en, const Json &, const Where &, const Context &c) {
  DazordReport r = dazord_pipeline(c.samples, c.zero);
  en.check(combine("split groupoid", [&] {
    std::vector<Certificate> v = r.split.axioms.axioms;
    auto m = r.split.morphism.certificates();
    v.insert(v.end(), m.begin(), m.end());
    if (r.split.cocycle)
      v.push_back(r.split.cocycle->multiplicative);
    return v;
  }()));
  en.check(r.symplectic.certificate());
  en.check(r.multiplicative.certificate);
  en.check(r.psi.pullback);
  en.check(r.membership);
  en.check(r.morphism);
  if (r.psi.psi)
    en.out("psi", r.psi.psi->to_string());
}

const std::map<std::string, DirectiveInfo, std::less<>> &directives() {
  static const std::map<std::string, DirectiveInfo, std::less<>> table{
      {"symplectise",
       {symplectise_dir,
        "symplectise {form, fiber = t, parameter = s, as?}\n"
        "Builds omega = dt ^ alpha + t d(alpha) on (t, x) with h_s(t, x) = (s t, x).\n"
        "Certifies d omega = 0, det(omega) not identically zero, and h_s^* omega = s omega\n"
        "identically in the symbol s.",
        {"form"}}},
      {"check contact",
       {contact_dir,
        "check contact {form}\n"
        "alpha on a chart of dimension 2n+1 is contact when its symplectisation is\n"
        "nondegenerate (primary criterion). Cross-check: the top coefficient of\n"
        "alpha ^ (d alpha)^n is not identically zero. Both verdicts are reported and must agree.",
        {"form"}}},
      {"recover",
       {recover_dir,
        "recover {symplectic | form + action, expect?}\n"
        "With E the Euler field of the action, i_E omega = t alpha. Certifies that i_E omega has\n"
        "no dt-leg and that its coefficients divided by t do not depend on t. With `expect`,\n"
        "the recovered form is compared with a given form, componentwise and as printed text.",
        {"symplectic", "form"}}},
      {"embed",
       {embed_dir,
        "embed {symplectic | form + action}\n"
        "eta = i_E omega and Psi(t, x) = (x, eta(t, x)) into T*M with the canonical form\n"
        "sum dp_b ^ dx^b. Certifies that eta has no dt-leg and Psi^* (sum dp_b ^ dx^b) = omega.",
        {"symplectic", "form"}}},
      {"check jacobi",
       {jacobi_dir,
        "check jacobi {pair}\n"
        "Poissonises (Lambda^{ab}, Lambda^a) to Lambda = (1/2t) Lambda^{ab} d_a^d_b + Lambda^a d_t^d_a\n"
        "and certifies the Schouten bracket [Lambda, Lambda] = 0. Convention: for bivectors\n"
        "[L, L]^{abc} = 2 sum_d (L^{ad} d_d L^{bc} + cyclic), so [X, Y] is the commutator of vector\n"
        "fields. The bracket of the bivector part alone is listed as the witness.",
        {"pair"}}},
      {"poissonise",
       {poissonise_dir,
        "poissonise {pair, fiber = t, parameter = s, as?}\n"
        "Lambda = (1/2t) Lambda^{ab} d_a^d_b + Lambda^a d_t^d_a on (t, x). Certifies [Lambda, Lambda] = 0\n"
        "and degree -1: (h_{1/s})_* Lambda = s^-1 Lambda identically in s.",
        {"pair"}}},
      {"kirillov_structure",
       {kirillov_dir,
        "kirillov_structure {bivector, parameter = s, as?}\n"
        "A bivector on a chart with a fiber coordinate t and the action h_s(t, x) = (s t, x).\n"
        "Certifies [Lambda, Lambda] = 0 and degree -1 under h_s (multivectors are pushed forward\n"
        "along h_{1/s}).",
        {"bivector"}}},
      {"coisotropic",
       {coisotropic_dir,
        "coisotropic {structure, vanishing}\n"
        "S = {y = 0} for the listed coordinates y. Certifies that Lambda^{ij} and Lambda^{it}\n"
        "restricted to S vanish for every pair of listed coordinates.",
        {"structure"}}},
      {"check e1",
       {e1_dir,
        "check e1 {pair, u, v}\n"
        "iota(u) = t u(x). Certifies iota([u, v]) = {iota u, iota v}, where\n"
        "[u, v] = Lambda^{ab} d_a u d_b v + Lambda^a (u d_a v - v d_a u) and {F, G} = Lambda(dF, dG).",
        {"pair"}}},
      {"check algebroid",
       {algebroid_dir,
        "check algebroid {structure}\n"
        "Takes the complete lift d_T Lambda to TP, rewrites it in the invariant coordinates\n"
        "(t, x, d_t / t, d_x) and certifies the linear form\n"
        "(1/t) L^{ia}(x) d_{x^a}^d_{y^i} + (1/2t) y^k L_k^{ij}(x) d_{y^j}^d_{y^i} + L^i(x) d_{y^i}^d_t:\n"
        "degree -1 in t and in y, vanishing (x,x) and (t,x) blocks, and the shapes of the\n"
        "mixed, linear and anchor blocks.",
        {"structure"}}},
      {"check intertwine",
       {intertwine_dir,
        "check intertwine {bivector, action}\n"
        "Compares the two compositions Th_s o Lambda^# and Lambda^# o T*h_s on T*M, where\n"
        "Th_s pushes velocities by the Jacobian and T*h_s(x, p) = (h_s x, p o (Dh_s)^-1).\n"
        "Also reports the homogeneity degree; the compositions agree exactly when the\n"
        "degree is -1.",
        {"bivector"}}},
      {"lift tangent",
       {[](Entry &en, const Json &d, const Where &w, const Context &c) { lifted_action(en, d, w, c, true); },
        "lift tangent {action, k = 0, as?}\n"
        "Th_s^k(x, v) = (h_s x, s^k Dh_s(x) v) on TM with velocities d_x. Certifies h_1 = id and\n"
        "the group law h_s o h_r = h_{sr}.",
        {"action"}}},
      {"lift phase",
       {[](Entry &en, const Json &d, const Where &w, const Context &c) { lifted_action(en, d, w, c, false); },
        "lift phase {action, k = 0, as?}\n"
        "T*h_s^k(x, p) = (h_s x, s^{k+1} p o (Dh_s(x))^-1) on T*M with momenta p_x. Certifies\n"
        "h_1 = id and the group law.",
        {"action"}}},
      {"lift bivector",
       {lift_bivector_dir,
        "lift bivector {bivector, as?}\n"
        "Complete lift d_T P to TM. Certifies [d_T P, d_T P] = d_T [P, P].",
        {"bivector"}}},
      {"check cocycle",
       {cocycle_dir,
        "check cocycle {groupoid, b}\n"
        "b is nowhere zero on sampled arrows and multiplicative: b(pr1) b(pr2) = b o m on\n"
        "composable pairs.",
        {"groupoid"}}},
      {"groupoid check-cocycle",
       {cocycle_dir,
        "groupoid check-cocycle {groupoid, b}\n"
        "Same as `check cocycle`: b nowhere zero and b(pr1) b(pr2) = b o m.",
        {"groupoid"}}},
      {"groupoid build",
       {build_dir, "groupoid build {groupoid}\nPrints the charts and structure maps of a declared groupoid.",
        {"groupoid"}}},
      {"groupoid verify",
       {verify_dir,
        "groupoid verify {groupoid}\n"
        "Certifies s(g) = t(h) on composable pairs, pair(pr1, pr2) = id, s(1_u) = u, t(1_u) = u,\n"
        "s(gh) = s(h), t(gh) = t(g), 1_t(g) g = g, g 1_s(g) = g, s(g^-1) = t(g), t(g^-1) = s(g),\n"
        "g g^-1 = 1_t(g), g^-1 g = 1_s(g), composability of triples and (gh)k = g(hk).",
        {"groupoid"}}},
      {"groupoid split",
       {split_dir,
        "groupoid split {base, cocycle, fiber = g, parameter = s, as?}\n"
        "Arrows (y0, g) with s = (sigma(y0), g), t = (tau(y0), b(y0) g) and\n"
        "(y0, b(y0') g)(y0', g) = (y0 y0', g); R^x acts by scaling g. Certifies the cocycle, the\n"
        "action laws, every groupoid axiom, h_s as a groupoid morphism, and the splitting\n"
        "map y -> (pi(y), s(y)).",
        {"base"}}},
      {"groupoid cotangent",
       {cotangent_dir,
        "groupoid cotangent {n | group | groupoid, parameter = s, as?}\n"
        "T* of the pair groupoid (or of a Lie group) with the canonical form. Certifies the\n"
        "groupoid axioms, <th th', X X'> = <th, X> + <th', X'> and\n"
        "omega(U U', V V') = omega(U, V) + omega(U', V') at seeded samples, degree +1 of omega under\n"
        "fiber scaling, and closure of C(G) (source and target momenta nonzero) under products,\n"
        "inverses and scaling.",
        {"group", "groupoid"}}},
      {"groupoid check-multiplicative",
       {multiplicative_dir,
        "groupoid check-multiplicative {groupoid, form?}\n"
        "omega(U U', V V') = omega(U, V) + omega(U', V') at seeded composable samples, i.e.\n"
        "m^* omega = pr1^* omega + pr2^* omega.",
        {"groupoid"}}},
      {"groupoid dazord",
       {dazord_dir,
        "groupoid dazord {}\n"
        "Splits pair(R) x R^x by b = 1/r, pulls the canonical form back along\n"
        "(x, y, r, g) -> (x, y, g/r, -g), embeds by Psi = (x, i_E omega) and certifies that the\n"
        "sampled Psi-images lie in C(G) and that Psi is a groupoid morphism.",
        {}}},
  };
  return table;
}

std::string target_of(const Json &d, const DirectiveInfo &info) {
  std::vector<std::string> parts;
  for (const auto &f : info.target_fields)
    if (d.contains(f) && d.at(f).is_string())
      parts.push_back(d.at(f).get<std::string>());
  return join(parts);
}

void finish(ReportEntry &e) {
  e.verdict = e.checks.empty() ? Verdict::proved : weakest(e.checks);
  if (e.verdict != Verdict::fail) {
    e.witnesses.clear();
    return;
  }
  std::vector<std::string> w;
  for (const auto &c : e.checks) {
    if (c.passed())
      continue;
    if (!c.witnesses.empty())
      for (const auto &x : c.witnesses)
        w.push_back(c.name + ": " + (c.detail.empty() ? "" : c.detail + " ") + "at " + x.to_string());
    else
      w.push_back(c.name + ": " + c.detail);
  }
  w.insert(w.end(), e.witnesses.begin(), e.witnesses.end());
  e.witnesses = std::move(w);
}

Entry run_one(const Json &d, std::size_t index, const Context &c) {
  Where w{"directives." + std::to_string(index)};
  std::string name = string_field(d, "directive", w);
  auto it = directives().find(name);
  if (it == directives().end())
    invalid(w / "directive", "unknown directive '" + name + "'");
  w = Where{w.path + " (" + name + ")"};
  Entry en;
  en.e.directive = name;
  en.e.target = target_of(d, it->second);
  try {
    it->second.run(en, d, w, c);
  } catch (const SceneError &) {
    throw;
  } catch (const std::exception &e) {
    invalid(w, e.what());
  }
  finish(en.e);
  return en;
}

} // namespace

Report run_scene(std::string_view text, const RunOptions &options, std::string scene_name) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    // Byte offset to line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SceneError(scene_name + ":" + std::to_string(line) + ":" + std::to_string(col), "invalid JSON");
  }
  if (!doc.is_object())
    throw SceneError(scene_name, "a scene is a JSON object");
  static const std::set<std::string> sections{"symbols", "charts", "tensors", "pairs", "actions", "groupoids",
                                              "directives", "description"};
  for (const auto &[key, value] : doc.items())
    if (!sections.count(key))
      throw SceneError(scene_name + ": " + key, "unknown section");

  ZeroOptions z;
  z.seed = options.seed;
  z.samples = std::max(1, options.samples);
  z.tolerance = options.tolerance;

  Scene sc;
  Where root;
  read_symbols(doc, root);
  read_charts(sc, doc, root);
  read_tensors(sc, doc, root);
  read_pairs(sc, doc, root);
  read_actions(sc, doc, root, z);
  read_groupoids(sc, doc, root, z);

  Report rep;
  rep.scene = std::move(scene_name);
  rep.options = options;
  Json dirs = doc.contains("directives") ? doc.at("directives") : Json::array();
  if (!dirs.is_array())
    throw SceneError("directives", "expected an array");
  Context ctx{sc, z, std::max(1, options.samples)};

  std::size_t i = 0;
  while (i < dirs.size()) {
    // A wave ends at a directive that stores a result; later directives may read it.
    std::size_t end = i;
    while (end < dirs.size() && !(dirs[end].is_object() && dirs[end].contains("as")))
      ++end;
    if (end == i)
      end = i + 1;
    std::vector<Entry> wave;
    if (options.parallel && end - i > 1) {
      std::vector<std::future<Entry>> futures;
      for (std::size_t k = i; k < end; ++k)
        futures.push_back(std::async(std::launch::async, [&, k] { return run_one(dirs[k], k, ctx); }));
      for (auto &f : futures)
        wave.push_back(f.get());
    } else {
      for (std::size_t k = i; k < end; ++k)
        wave.push_back(run_one(dirs[k], k, ctx));
    }
    for (auto &en : wave) {
      if (en.store)
        en.store(sc);
      rep.entries.push_back(std::move(en.e));
    }
    i = end;
  }
  return rep;
}

Report run_scene_file(const std::string &path, const RunOptions &options) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw SceneError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos)
    name = name.substr(slash + 1);
  try {
    return run_scene(ss.str(), options, name);
  } catch (const SceneError &e) {
    if (e.where.rfind(name, 0) == 0)
      throw;
    throw SceneError(name + ": " + e.where, std::string(e.what()).substr(e.where.size() + 2));
  }
}

std::string to_json(const Report &report) {
  Json j;
  j["schema"] = 1;
  j["scene"] = report.scene;
  j["seed"] = report.options.seed;
  j["samples"] = report.options.samples;
  j["tolerance"] = report.options.tolerance;
  Json entries = Json::array();
  int passed = 0;
  for (const auto &e : report.entries) {
    Json je;
    je["directive"] = e.directive;
    if (!e.target.empty())
      je["target"] = e.target;
    je["verdict"] = verdict_name(e.verdict);
    Json checks = Json::array();
    for (const auto &c : e.checks) {
      Json jc;
      jc["name"] = c.name;
      jc["verdict"] = verdict_name(c.verdict);
      if (!c.detail.empty())
        jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
    }
    je["checks"] = std::move(checks);
    if (!e.output.empty()) {
      Json out = Json::object();
      for (const auto &[k, v] : e.output)
        out[k] = v;
      je["output"] = std::move(out);
    }
    if (!e.witnesses.empty())
      je["witnesses"] = e.witnesses;
    entries.push_back(std::move(je));
    passed += e.verdict != Verdict::fail;
  }
  j["entries"] = std::move(entries);
  j["summary"] = Json{{"directives", report.entries.size()},
                      {"passed", passed},
                      {"failed", static_cast<int>(report.entries.size()) - passed}};
  return j.dump(2) + "\n";
}

std::string to_text(const Report &report) {
  std::ostringstream os;
  int passed = 0;
  for (const auto &e : report.entries) {
    os << "[" << to_string(e.verdict) << "] " << e.directive;
    if (!e.target.empty())
      os << " (" << e.target << ")";
    os << "\n";
    for (const auto &c : e.checks) {
      os << "    " << (c.passed() ? "ok   " : "FAIL ") << c.name << " [" << to_string(c.verdict) << "]";
      if (!c.detail.empty())
        os << " " << abbreviate(c.detail);
      os << "\n";
    }
    for (const auto &[k, v] : e.output)
      os << "    " << k << " = " << abbreviate(v) << "\n";
    for (const auto &w : e.witnesses)
      os << "    witness: " << abbreviate(w) << "\n";
    passed += e.verdict != Verdict::fail;
  }
  os << report.entries.size() << " directives, " << passed << " passed, "
     << report.entries.size() - static_cast<std::size_t>(passed) << " failed\n";
  return os.str();
}

std::string explain(std::string_view directive) {
  auto it = directives().find(directive);
  if (it == directives().end())
    throw SceneError("explain", "unknown directive '" + std::string(directive) + "'");
  return it->second.explanation + "\n";
}

std::vector<std::string> directive_names() {
  std::vector<std::string> out;
  for (const auto &[k, v] : directives())
    out.push_back(k);
  return out;
}

} // namespace klab
