#include "klab/tensor.hpp"

#include <algorithm>
#include <sstream>

namespace klab {

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(std::string name, std::vector<Symbol> coords, std::optional<Symbol> fiber)
    : name_(std::move(name)), coords_(std::move(coords)), fiber_(fiber) {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i].is_function())
      throw TensorError("chart '" + name_ + "': '" + coords_[i].name() + "' is a function symbol");
    for (std::size_t j = 0; j < i; ++j)
      if (coords_[i] == coords_[j])
        throw TensorError("chart '" + name_ + "': repeated coordinate '" + coords_[i].name() + "'");
  }
  if (fiber_ && index_of(*fiber_) < 0)
    throw TensorError("chart '" + name_ + "': fiber coordinate '" + fiber_->name() + "' is not a coordinate");
}

Chart Chart::of(std::string name, const std::vector<std::string> &coords, const std::optional<std::string> &fiber) {
  std::vector<Symbol> syms;
  for (const auto &c : coords)
    syms.push_back(coordinate(c));
  std::optional<Symbol> f;
  if (fiber)
    f = coordinate(*fiber);
  return Chart(std::move(name), std::move(syms), f);
}

int Chart::index_of(Symbol s) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] == s)
      return static_cast<int>(i);
  return -1;
}

int Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i].name() == name)
      return static_cast<int>(i);
  return -1;
}

std::vector<std::string> Chart::names() const {
  std::vector<std::string> out;
  for (Symbol s : coords_)
    out.push_back(s.name());
  return out;
}

// ---------------------------------------------------------------------------
// Index helpers

int sort_index(Index &idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j])
        return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i])
      return 0;
  return sign;
}

std::vector<Index> increasing_tuples(int n, int k) {
  std::vector<Index> out;
  if (k < 0 || k > n)
    return out;
  Index cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i)
      --i;
    if (i < 0)
      break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j)
      cur[j] = cur[j - 1] + 1;
  }
  return out;
}

namespace {

// Sign of merging two increasing lists, or 0 when they intersect.
int shuffle_sign(const Index &a, const Index &b, Index &merged) {
  merged.clear();
  int inversions = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      merged.push_back(a[i++]);
    } else {
      if (i < a.size() && a[i] == b[j])
        return 0;
      inversions += static_cast<int>(a.size() - i);
      merged.push_back(b[j++]);
    }
  }
  return inversions % 2 ? -1 : 1;
}

Index remove_at(const Index &idx, std::size_t pos) {
  Index out = idx;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

void require_same_chart(const Chart &a, const Chart &b) {
  if (!a.same_coordinates(b))
    throw TensorError("chart mismatch: '" + a.name() + "' vs '" + b.name() + "'");
}

} // namespace

// ---------------------------------------------------------------------------
// Alternating

template <TensorKind K> Alternating<K>::Alternating(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0)
    throw TensorError("degree " + std::to_string(degree) + " is negative on chart '" + chart_.name() + "'");
}

template <TensorKind K> Alternating<K> Alternating<K>::scalar(Chart chart, RationalFunction value) {
  Alternating out(std::move(chart), 0);
  out.set({}, value);
  return out;
}

template <TensorKind K> RationalFunction Alternating<K>::get(Index idx) const {
  if (static_cast<int>(idx.size()) != degree_)
    throw TensorError("index length does not match the degree");
  int sign = sort_index(idx);
  if (sign == 0)
    return {};
  auto it = components_.find(idx);
  if (it == components_.end())
    return {};
  return sign > 0 ? it->second : -it->second;
}

template <TensorKind K> RationalFunction Alternating<K>::component(const std::vector<Symbol> &legs) const {
  Index idx;
  for (Symbol s : legs) {
    int i = chart_.index_of(s);
    if (i < 0)
      throw TensorError("'" + s.name() + "' is not a coordinate of chart '" + chart_.name() + "'");
    idx.push_back(i);
  }
  return get(idx);
}

template <TensorKind K> void Alternating<K>::set(Index idx, const RationalFunction &value) {
  if (static_cast<int>(idx.size()) != degree_)
    throw TensorError("index length does not match the degree");
  for (int i : idx)
    if (i < 0 || i >= chart_.dim())
      throw TensorError("index out of range");
  int sign = sort_index(idx);
  if (sign == 0) {
    if (!value.is_zero())
      throw TensorError("repeated index with a nonzero value");
    return;
  }
  if (value.is_zero())
    components_.erase(idx);
  else
    components_[idx] = sign > 0 ? value : -value;
}

template <TensorKind K> void Alternating<K>::set_component(const std::vector<Symbol> &legs, const Expression &value) {
  Index idx;
  for (Symbol s : legs) {
    int i = chart_.index_of(s);
    if (i < 0)
      throw TensorError("'" + s.name() + "' is not a coordinate of chart '" + chart_.name() + "'");
    idx.push_back(i);
  }
  set(idx, value.normal_form());
}

template <TensorKind K> void Alternating<K>::add(Index idx, const RationalFunction &value) {
  if (value.is_zero())
    return;
  int sign = sort_index(idx);
  if (sign == 0)
    return;
  auto it = components_.find(idx);
  RationalFunction v = sign > 0 ? value : -value;
  if (it == components_.end()) {
    set(idx, v);
    return;
  }
  it->second = it->second + v;
  if (it->second.is_zero())
    components_.erase(it);
}

template <TensorKind K> Alternating<K> Alternating<K>::operator-() const {
  return transformed([](const RationalFunction &v) { return -v; });
}

template <TensorKind K> Alternating<K> Alternating<K>::scaled(const RationalFunction &c) const {
  return transformed([&](const RationalFunction &v) { return v * c; });
}

template <TensorKind K> Alternating<K> Alternating<K>::on_chart(Chart chart) const {
  if (chart.dim() != chart_.dim())
    throw TensorError("chart dimension mismatch");
  Alternating out(std::move(chart), degree_);
  out.components_ = components_;
  return out;
}

template <TensorKind K> void Alternating<K>::require_same(const Alternating &o) const {
  require_same_chart(chart_, o.chart_);
  if (degree_ != o.degree_)
    throw TensorError("degree mismatch");
}

template <TensorKind K> std::string Alternating<K>::label(const Index &idx) const {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i)
    out += (i ? "," : "") + chart_[idx[i]].name();
  return out + ")";
}

template <TensorKind K> std::string Alternating<K>::to_string() const {
  if (components_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[idx, v] : components_) {
    std::string coeff = format(v);
    std::string basis;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i)
        basis += "^";
      basis += (K == TensorKind::form ? "d" : "d/d") + chart_[idx[i]].name();
    }
    std::string term;
    if (basis.empty())
      term = coeff;
    else if (coeff == "1")
      term = basis;
    else if (coeff == "-1")
      term = "-" + basis;
    else if (coeff.find_first_of("+ ") != std::string::npos && coeff.front() != '(')
      term = "(" + coeff + ")*" + basis;
    else
      term = coeff + "*" + basis;
    if (!first)
      os << (term.front() == '-' ? " - " : " + ") << (term.front() == '-' ? term.substr(1) : term);
    else
      os << term;
    first = false;
  }
  return os.str();
}

template class Alternating<TensorKind::multivector>;
template class Alternating<TensorKind::form>;

// ---------------------------------------------------------------------------
// Constructors

Multivector vector_field(const Chart &chart, const std::vector<RationalFunction> &components) {
  if (static_cast<int>(components.size()) != chart.dim())
    throw TensorError("vector field needs one component per coordinate");
  Multivector X(chart, 1);
  for (int i = 0; i < chart.dim(); ++i)
    X.set({i}, components[i]);
  return X;
}

DifferentialForm one_form(const Chart &chart, const std::vector<RationalFunction> &components) {
  if (static_cast<int>(components.size()) != chart.dim())
    throw TensorError("one-form needs one component per coordinate");
  DifferentialForm w(chart, 1);
  for (int i = 0; i < chart.dim(); ++i)
    w.set({i}, components[i]);
  return w;
}

DifferentialForm differential(const Chart &chart, const RationalFunction &f) {
  DifferentialForm w(chart, 1);
  for (int i = 0; i < chart.dim(); ++i)
    w.set({i}, derivative(f, chart[i]));
  return w;
}

Multivector coordinate_vector(const Chart &chart, Symbol q) {
  int i = chart.index_of(q);
  if (i < 0)
    throw TensorError("'" + q.name() + "' is not a coordinate of chart '" + chart.name() + "'");
  Multivector X(chart, 1);
  X.set({i}, RationalFunction(1L));
  return X;
}

DifferentialForm coordinate_form(const Chart &chart, Symbol q) {
  int i = chart.index_of(q);
  if (i < 0)
    throw TensorError("'" + q.name() + "' is not a coordinate of chart '" + chart.name() + "'");
  DifferentialForm w(chart, 1);
  w.set({i}, RationalFunction(1L));
  return w;
}

// ---------------------------------------------------------------------------
// Exterior algebra

template <TensorKind K> Alternating<K> wedge(const Alternating<K> &a, const Alternating<K> &b) {
  require_same_chart(a.chart(), b.chart());
  int deg = a.degree() + b.degree();
  Alternating<K> out(a.chart(), deg);
  Index merged;
  for (const auto &[I, u] : a.components())
    for (const auto &[J, v] : b.components()) {
      int sign = shuffle_sign(I, J, merged);
      if (sign == 0)
        continue;
      RationalFunction c = u * v;
      out.add(merged, sign > 0 ? c : -c);
    }
  return out;
}

template Multivector wedge(const Multivector &, const Multivector &);
template DifferentialForm wedge(const DifferentialForm &, const DifferentialForm &);

template <TensorKind K> Alternating<K> partial(const Alternating<K> &T, Symbol v) {
  return T.transformed([&](const RationalFunction &c) { return derivative(c, v); });
}

template Multivector partial(const Multivector &, Symbol);
template DifferentialForm partial(const DifferentialForm &, Symbol);

DifferentialForm exterior_derivative(const DifferentialForm &w) {
  const Chart &chart = w.chart();
  DifferentialForm out(chart, w.degree() + 1);
  Index merged;
  for (const auto &[I, c] : w.components())
    for (int a = 0; a < chart.dim(); ++a) {
      int sign = shuffle_sign({a}, I, merged);
      if (sign == 0)
        continue;
      RationalFunction dc = derivative(c, chart[a]);
      out.add(merged, sign > 0 ? dc : -dc);
    }
  return out;
}

namespace {
DifferentialForm d_or_zero(const DifferentialForm &w) {
  if (w.degree() >= w.chart().dim())
    return DifferentialForm();
  return exterior_derivative(w);
}
} // namespace

DifferentialForm interior_product(const Multivector &X, const DifferentialForm &w) {
  require_same_chart(X.chart(), w.chart());
  if (X.degree() != 1)
    throw TensorError("interior product needs a vector field");
  if (w.degree() < 1)
    throw TensorError("interior product of a function is undefined");
  DifferentialForm out(w.chart(), w.degree() - 1);
  for (const auto &[I, c] : w.components())
    for (std::size_t p = 0; p < I.size(); ++p) {
      RationalFunction x = X.get({I[p]});
      if (x.is_zero())
        continue;
      RationalFunction v = x * c;
      out.add(remove_at(I, p), p % 2 ? -v : v);
    }
  return out;
}

RationalFunction directional_derivative(const Multivector &X, const RationalFunction &f) {
  if (X.degree() != 1)
    throw TensorError("directional derivative needs a vector field");
  RationalFunction out;
  for (const auto &[I, c] : X.components())
    out = out + c * derivative(f, X.chart()[I[0]]);
  return out;
}

DifferentialForm lie_derivative(const Multivector &X, const DifferentialForm &w) {
  require_same_chart(X.chart(), w.chart());
  if (w.degree() == 0)
    return DifferentialForm::scalar(w.chart(), directional_derivative(X, w.get({})));
  DifferentialForm out = exterior_derivative(interior_product(X, w));
  DifferentialForm dw = d_or_zero(w);
  if (dw.degree() == w.degree() + 1)
    out = out + interior_product(X, dw);
  return out;
}

Multivector lie_derivative(const Multivector &X, const Multivector &P) {
  if (X.degree() != 1)
    throw TensorError("Lie derivative needs a vector field");
  if (P.degree() == 0)
    return Multivector::scalar(P.chart(), directional_derivative(X, P.get({})));
  return schouten(X, P);
}

namespace {
// P <- d/dtheta_a, the right derivative in the odd variable of coordinate a.
Multivector right_derivative(const Multivector &P, int a) {
  Multivector out(P.chart(), P.degree() - 1);
  int k = P.degree();
  for (const auto &[I, c] : P.components()) {
    auto it = std::find(I.begin(), I.end(), a);
    if (it == I.end())
      continue;
    auto pos = static_cast<int>(it - I.begin());
    out.add(remove_at(I, static_cast<std::size_t>(pos)), (k - 1 - pos) % 2 ? -c : c);
  }
  return out;
}
} // namespace

Multivector schouten(const Multivector &P, const Multivector &Q) {
  require_same_chart(P.chart(), Q.chart());
  int p = P.degree(), q = Q.degree();
  int deg = p + q - 1;
  const Chart &chart = P.chart();
  if (deg < 0)
    throw TensorError("bracket of two functions is undefined");
  Multivector out(chart, deg);
  bool flip = ((p - 1) * (q - 1)) % 2 != 0;
  for (int a = 0; a < chart.dim(); ++a) {
    if (p > 0) {
      Multivector rp = right_derivative(P, a);
      if (!rp.is_zero())
        out = out + wedge(rp, partial(Q, chart[a]));
    }
    if (q > 0) {
      Multivector rq = right_derivative(Q, a);
      if (!rq.is_zero()) {
        Multivector term = wedge(rq, partial(P, chart[a]));
        out = flip ? out + term : out - term;
      }
    }
  }
  return out;
}

Multivector sharp(const Multivector &lambda, const DifferentialForm &theta) {
  require_same_chart(lambda.chart(), theta.chart());
  if (lambda.degree() != 2 || theta.degree() != 1)
    throw TensorError("sharp needs a bivector and a one-form");
  Multivector out(lambda.chart(), 1);
  for (const auto &[I, c] : lambda.components()) {
    // Lambda^{ab} theta_b and Lambda^{ba} theta_a = -Lambda^{ab} theta_a
    out.add({I[0]}, c * theta.get({I[1]}));
    out.add({I[1]}, -(c * theta.get({I[0]})));
  }
  return out;
}

RationalFunction pairing(const Multivector &lambda, const DifferentialForm &alpha, const DifferentialForm &beta) {
  require_same_chart(lambda.chart(), alpha.chart());
  require_same_chart(lambda.chart(), beta.chart());
  RationalFunction out;
  for (const auto &[I, c] : lambda.components()) {
    RationalFunction m = alpha.get({I[0]}) * beta.get({I[1]}) - alpha.get({I[1]}) * beta.get({I[0]});
    out = out + c * m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Determinants

RationalFunction determinant(const Matrix &m0) {
  std::size_t n = m0.size();
  if (n == 0)
    return RationalFunction(1L);
  for (const auto &row : m0)
    if (row.size() != n)
      throw TensorError("determinant of a non-square matrix");
  if (n == 1)
    return m0[0][0];
  if (n == 2)
    return m0[0][0] * m0[1][1] - m0[0][1] * m0[1][0];
  if (n == 3)
    return m0[0][0] * (m0[1][1] * m0[2][2] - m0[1][2] * m0[2][1]) -
           m0[0][1] * (m0[1][0] * m0[2][2] - m0[1][2] * m0[2][0]) +
           m0[0][2] * (m0[1][0] * m0[2][1] - m0[1][1] * m0[2][0]);
  Matrix m = m0;
  RationalFunction det(1L);
  for (std::size_t col = 0; col < n; ++col) {
    // Prefer the simplest nonzero pivot to keep intermediate expressions small.
    std::size_t pivot = n;
    std::size_t best = 0;
    for (std::size_t r = col; r < n; ++r) {
      if (m[r][col].is_zero())
        continue;
      std::size_t size = m[r][col].num().terms().size() + m[r][col].den().terms().size();
      if (pivot == n || size < best) {
        pivot = r;
        best = size;
      }
    }
    if (pivot == n)
      return {};
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det = det * m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero())
        continue;
      RationalFunction f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c)
        m[r][c] = m[r][c] - f * m[col][c];
    }
  }
  return det;
}

template <TensorKind K> Matrix component_matrix(const Alternating<K> &T) {
  if (T.degree() != 2)
    throw TensorError("component matrix needs a degree-2 tensor");
  auto n = static_cast<std::size_t>(T.chart().dim());
  Matrix m(n, std::vector<RationalFunction>(n));
  for (const auto &[I, c] : T.components()) {
    m[I[0]][I[1]] = c;
    m[I[1]][I[0]] = -c;
  }
  return m;
}

template Matrix component_matrix(const Multivector &);
template Matrix component_matrix(const DifferentialForm &);

namespace {
RationalFunction minor(const CoordMap &phi, const Index &rows, const Index &cols) {
  Matrix m(rows.size(), std::vector<RationalFunction>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      m[r][c] = phi.jacobian(rows[r], cols[c]);
  return determinant(m);
}
} // namespace

// ---------------------------------------------------------------------------
// CoordMap

CoordMap::CoordMap(Chart source, Chart target, std::vector<RationalFunction> images,
                   std::optional<std::vector<RationalFunction>> inverse, std::optional<Symbol> parameter,
                   const ZeroOptions &options, bool verify_inverse)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)),
      inverse_(std::move(inverse)), parameter_(parameter) {
  if (static_cast<int>(images_.size()) != target_.dim())
    throw TensorError("map needs one image per target coordinate");
  if (inverse_ && static_cast<int>(inverse_->size()) != source_.dim())
    throw TensorError("inverse needs one image per source coordinate");
  jacobian_.assign(images_.size(), std::vector<RationalFunction>(static_cast<std::size_t>(source_.dim())));
  for (std::size_t i = 0; i < images_.size(); ++i)
    for (int j = 0; j < source_.dim(); ++j)
      jacobian_[i][static_cast<std::size_t>(j)] = derivative(images_[i], source_[j]);
  if (inverse_ && verify_inverse) {
    std::vector<std::pair<std::string, RationalFunction>> residuals;
    for (int i = 0; i < source_.dim(); ++i)
      residuals.emplace_back("inverse after map, " + source_[i].name(),
                             pull((*inverse_)[static_cast<std::size_t>(i)]) -
                                 Expression(source_[i]).normal_form());
    for (int j = 0; j < target_.dim(); ++j)
      residuals.emplace_back("map after inverse, " + target_[j].name(),
                             push_point(images_[static_cast<std::size_t>(j)]) -
                                 Expression(target_[j]).normal_form());
    Certificate c = certify_all_zero("inverse", residuals, options);
    if (!c.passed())
      throw TensorError("supplied inverse is not an inverse (" + c.detail + ")");
  }
}

const std::vector<RationalFunction> &CoordMap::inverse() const {
  if (!inverse_)
    throw TensorError("map has no inverse");
  return *inverse_;
}

RationalFunction CoordMap::pull(const RationalFunction &f) const {
  std::map<Symbol, RationalFunction> b;
  for (int j = 0; j < target_.dim(); ++j)
    b.emplace(target_[j], images_[static_cast<std::size_t>(j)]);
  return substitute(f, b);
}

RationalFunction CoordMap::push_point(const RationalFunction &g) const {
  const auto &inv = inverse();
  std::map<Symbol, RationalFunction> b;
  for (int i = 0; i < source_.dim(); ++i)
    b.emplace(source_[i], inv[static_cast<std::size_t>(i)]);
  return substitute(g, b);
}

CoordMap CoordMap::then(const CoordMap &next) const {
  require_same_chart(target_, next.source_);
  std::vector<RationalFunction> images;
  for (const auto &img : next.images_)
    images.push_back(pull(img));
  std::optional<std::vector<RationalFunction>> inv;
  if (inverse_ && next.inverse_) {
    inv.emplace();
    for (const auto &img : *inverse_)
      inv->push_back(next.push_point(img));
  }
  CoordMap out;
  out.source_ = source_;
  out.target_ = next.target_;
  out.images_ = std::move(images);
  out.inverse_ = std::move(inv);
  out.parameter_ = parameter_ ? parameter_ : next.parameter_;
  out.jacobian_.assign(out.images_.size(), std::vector<RationalFunction>(static_cast<std::size_t>(source_.dim())));
  for (std::size_t i = 0; i < out.images_.size(); ++i)
    for (int j = 0; j < source_.dim(); ++j)
      out.jacobian_[i][static_cast<std::size_t>(j)] = derivative(out.images_[i], source_[j]);
  return out;
}

CoordMap CoordMap::inverted() const {
  return CoordMap(target_, source_, inverse(), images_, parameter_);
}

std::string CoordMap::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < source_.dim(); ++i)
    os << (i ? ", " : "") << source_[i].name();
  os << ") -> (";
  for (std::size_t j = 0; j < images_.size(); ++j)
    os << (j ? ", " : "") << format(images_[j]);
  os << ")";
  return os.str();
}

Multivector pushforward(const CoordMap &phi, const Multivector &P) {
  require_same_chart(phi.source(), P.chart());
  if (!phi.has_inverse())
    throw TensorError("pushforward needs an inverse map");
  Multivector out(phi.target(), P.degree());
  if (P.degree() == 0) {
    out.set({}, phi.push_point(P.get({})));
    return out;
  }
  for (const Index &J : increasing_tuples(phi.target().dim(), P.degree())) {
    RationalFunction acc;
    for (const auto &[I, c] : P.components()) {
      RationalFunction m = minor(phi, J, I);
      if (!m.is_zero())
        acc = acc + m * c;
    }
    if (!acc.is_zero())
      out.set(J, phi.push_point(acc));
  }
  return out;
}

DifferentialForm pullback(const CoordMap &phi, const DifferentialForm &w) {
  require_same_chart(phi.target(), w.chart());
  DifferentialForm out(phi.source(), w.degree());
  if (w.degree() == 0) {
    out.set({}, phi.pull(w.get({})));
    return out;
  }
  std::map<Index, RationalFunction> pulled;
  for (const auto &[J, c] : w.components())
    pulled.emplace(J, phi.pull(c));
  for (const Index &I : increasing_tuples(phi.source().dim(), w.degree())) {
    RationalFunction acc;
    for (const auto &[J, c] : pulled) {
      RationalFunction m = minor(phi, J, I);
      if (!m.is_zero())
        acc = acc + m * c;
    }
    out.set(I, acc);
  }
  return out;
}

std::optional<Matrix> invert(Matrix m) {
  std::size_t n = m.size();
  Matrix inv(n, std::vector<RationalFunction>(n));
  for (std::size_t i = 0; i < n; ++i)
    inv[i][i] = RationalFunction(1L);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].is_zero())
      ++p;
    if (p == n)
      return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    RationalFunction piv = RationalFunction(1L) / m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] = m[c][j] * piv;
      inv[c][j] = inv[c][j] * piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c].is_zero())
        continue;
      RationalFunction f = m[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] = m[r][j] - f * m[c][j];
        inv[r][j] = inv[r][j] - f * inv[c][j];
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// RxAction

RxAction::RxAction(Chart chart, Symbol parameter, std::vector<RationalFunction> images, const ZeroOptions &options)
    : chart_(std::move(chart)), parameter_(parameter), images_(std::move(images)) {
  if (parameter_.kind() != SymbolKind::parameter)
    throw TensorError("action parameter '" + parameter_.name() + "' must be declared as a parameter");
  if (static_cast<int>(images_.size()) != chart_.dim())
    throw TensorError("action needs one image per coordinate");
  RationalFunction s = Expression(parameter_).normal_form();
  auto inv = images_at(RationalFunction(1L) / s);
  // The group law certificate below stands in for the inverse check.
  map_ = CoordMap(chart_, chart_, images_, inv, parameter_, options, false);
  inverse_map_ = CoordMap(chart_, chart_, inv, images_, parameter_, options, false);

  std::vector<std::pair<std::string, RationalFunction>> id_res;
  auto at_one = images_at(RationalFunction(1L));
  for (int i = 0; i < chart_.dim(); ++i)
    id_res.emplace_back(chart_[i].name(), at_one[static_cast<std::size_t>(i)] - Expression(chart_[i]).normal_form());
  identity_ = certify_all_zero("h_1 = id", id_res, options);

  Symbol r = SymbolTable::global().fresh(parameter_.name(), SymbolKind::parameter);
  RationalFunction rr = Expression(r).normal_form();
  auto h_r = images_at(rr);
  auto h_sr = images_at(s * rr);
  std::vector<std::pair<std::string, RationalFunction>> law;
  for (int i = 0; i < chart_.dim(); ++i)
    law.emplace_back(chart_[i].name(), map_.pull(h_r[static_cast<std::size_t>(i)]) - h_sr[static_cast<std::size_t>(i)]);
  group_law_ = certify_all_zero("h_s o h_r = h_sr", law, options);

  std::vector<RationalFunction> euler;
  for (const auto &img : images_)
    euler.push_back(substitute(derivative(img, parameter_), {{parameter_, RationalFunction(1L)}}));
  euler_ = vector_field(chart_, euler);
}

RxAction RxAction::fiber_scaling(const Chart &chart, Symbol parameter) {
  if (!chart.fiber())
    throw TensorError("chart '" + chart.name() + "' has no fiber coordinate");
  std::vector<RationalFunction> images;
  RationalFunction s = Expression(parameter).normal_form();
  for (Symbol q : chart.coords()) {
    RationalFunction v = Expression(q).normal_form();
    images.push_back(q == *chart.fiber() ? s * v : v);
  }
  return RxAction(chart, parameter, std::move(images));
}

std::vector<RationalFunction> RxAction::images_at(const RationalFunction &value) const {
  std::vector<RationalFunction> out;
  for (const auto &img : images_)
    out.push_back(substitute(img, {{parameter_, value}}));
  return out;
}

// ---------------------------------------------------------------------------
// Homogeneity

std::string HomogeneityReport::describe() const {
  switch (status) {
  case Status::homogeneous: return "degree " + std::to_string(degree);
  case Status::not_homogeneous: return "not homogeneous (" + residual + ")";
  case Status::every_degree: return "every degree (zero tensor)";
  }
  return "?";
}

namespace {

// Exponent k when r = s^k exactly.
std::optional<int> pure_power(const RationalFunction &r, Symbol s) {
  if (r.is_zero() || !r.num().is_monomial() || !r.den().is_monomial())
    return std::nullopt;
  const Term &n = r.num().leading_term(), &d = r.den().leading_term();
  if (n.coeff / d.coeff != 1)
    return std::nullopt;
  GenId gs = generators::of_symbol(s);
  for (const auto &[g, e] : n.mono)
    if (g != gs)
      return std::nullopt;
  for (const auto &[g, e] : d.mono)
    if (g != gs)
      return std::nullopt;
  return mono_degree(n.mono, gs) - mono_degree(d.mono, gs);
}

RationalFunction power_of(Symbol s, int k) { return Expression(s).normal_form().pow(k); }

template <TensorKind K> Alternating<K> transported(const Alternating<K> &T, const RxAction &h) {
  if constexpr (K == TensorKind::form)
    return pullback(h.map(), T);
  else
    return pushforward(h.inverse_map(), T);
}

template <TensorKind K> Alternating<K> infinitesimal(const Alternating<K> &T, const RxAction &h) {
  return lie_derivative(h.euler(), T);
}

} // namespace

template <TensorKind K>
HomogeneityReport homogeneity_degree(const Alternating<K> &T, const RxAction &h, const ZeroOptions &options) {
  require_same_chart(T.chart(), h.chart());
  HomogeneityReport rep;
  if (T.is_zero()) {
    rep.status = HomogeneityReport::Status::every_degree;
    rep.finite = pass("h_s^* T = s^k T", "zero tensor");
    rep.infinitesimal = pass("L_Delta T = k T", "zero tensor");
    return rep;
  }
  Alternating<K> moved = transported(T, h);
  const auto &[I0, c0] = *T.components().begin();
  RationalFunction ratio = moved.get(I0) / c0;
  auto k = pure_power(ratio, h.parameter());
  if (!k) {
    rep.status = HomogeneityReport::Status::not_homogeneous;
    rep.residual = "component " + T.label(I0) + " scales by " + abbreviate(format(ratio));
    rep.finite = fail("h_s^* T = s^k T", rep.residual);
    rep.infinitesimal = fail("L_Delta T = k T", "no candidate degree");
    return rep;
  }
  rep.degree = *k;
  RationalFunction sk = power_of(h.parameter(), *k);
  std::vector<std::pair<std::string, RationalFunction>> finite, inf;
  Alternating<K> diff = moved - T.scaled(sk);
  for (const auto &[I, c] : diff.components())
    finite.emplace_back(T.label(I), c);
  rep.finite = certify_all_zero("h_s^* T = s^" + std::to_string(*k) + " T", finite, options);
  Alternating<K> ldiff = infinitesimal(T, h) - T.scaled(RationalFunction(static_cast<long>(*k)));
  for (const auto &[I, c] : ldiff.components())
    inf.emplace_back(T.label(I), c);
  rep.infinitesimal = certify_all_zero("L_Delta T = " + std::to_string(*k) + " T", inf, options);
  if (rep.finite.passed()) {
    rep.status = HomogeneityReport::Status::homogeneous;
  } else {
    rep.status = HomogeneityReport::Status::not_homogeneous;
    rep.residual = rep.finite.detail;
  }
  return rep;
}

template HomogeneityReport homogeneity_degree(const Multivector &, const RxAction &, const ZeroOptions &);
template HomogeneityReport homogeneity_degree(const DifferentialForm &, const RxAction &, const ZeroOptions &);

HomogeneityReport homogeneity_degree(const RationalFunction &f, const RxAction &h, const ZeroOptions &options) {
  return homogeneity_degree(DifferentialForm::scalar(h.chart(), f), h, options);
}

// ---------------------------------------------------------------------------
// Nondegeneracy

NondegeneracyReport nondegenerate(const DifferentialForm &w, const ZeroOptions &options) {
  if (w.degree() != 2)
    throw TensorError("nondegeneracy needs a 2-form");
  NondegeneracyReport rep;
  rep.even_dimension = w.chart().dim() % 2 == 0;
  if (!rep.even_dimension) {
    rep.reason = "odd dimension " + std::to_string(w.chart().dim());
    rep.nonvanishing = fail("det != 0", rep.reason);
    return rep;
  }
  rep.determinant = determinant(component_matrix(w));
  rep.nonvanishing = certify_nonzero("det != 0", rep.determinant, options);
  if (!rep.nonvanishing.passed()) {
    rep.reason = "determinant vanishes identically";
    return rep;
  }
  const RationalFunction &d = rep.determinant;
  if (d.num().is_monomial() && d.den().is_monomial()) {
    std::vector<GenId> allowed;
    if (w.chart().fiber())
      allowed.push_back(generators::of_symbol(*w.chart().fiber()));
    bool ok = true;
    for (GenId g : d.generators())
      if (std::find(allowed.begin(), allowed.end(), g) == allowed.end())
        ok = false;
    rep.nowhere_zero = ok;
  }
  rep.reason = "det = " + abbreviate(format(d));
  return rep;
}

} // namespace klab
