#pragma once

#include "klab/certificate.hpp"
#include "klab/expression.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace klab {

struct TensorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordered coordinate system; optionally one coordinate is the fiber
/// coordinate t of a principal R^x-bundle.
class Chart {
public:
  Chart() = default;
  Chart(std::string name, std::vector<Symbol> coords, std::optional<Symbol> fiber = std::nullopt);
  /// Declares the coordinates as needed.
  static Chart of(std::string name, const std::vector<std::string> &coords,
                  const std::optional<std::string> &fiber = std::nullopt);

  const std::string &name() const { return name_; }
  const std::vector<Symbol> &coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::optional<Symbol> &fiber() const { return fiber_; }
  Symbol operator[](int i) const { return coords_.at(static_cast<std::size_t>(i)); }
  /// Position of `s`, or -1.
  int index_of(Symbol s) const;
  int index_of(std::string_view name) const;
  bool contains(Symbol s) const { return index_of(s) >= 0; }
  bool same_coordinates(const Chart &o) const { return coords_ == o.coords_; }
  std::vector<std::string> names() const;

private:
  std::string name_;
  std::vector<Symbol> coords_;
  std::optional<Symbol> fiber_;
};

/// Strictly increasing list of coordinate positions.
using Index = std::vector<int>;

/// Sorts an index list; returns the permutation sign, or 0 on a repeated entry.
int sort_index(Index &idx);
std::vector<Index> increasing_tuples(int n, int k);

enum class TensorKind { multivector, form };

/// Totally antisymmetric tensor stored on strictly increasing index tuples.
template <TensorKind K> class Alternating {
public:
  using Components = std::map<Index, RationalFunction>;

  Alternating() = default;
  Alternating(Chart chart, int degree);
  static Alternating scalar(Chart chart, RationalFunction value);

  const Chart &chart() const { return chart_; }
  int degree() const { return degree_; }
  const Components &components() const { return components_; }

  /// Component for any ordering of the indices (sign applied, 0 on repeats).
  RationalFunction get(Index idx) const;
  RationalFunction component(const std::vector<Symbol> &legs) const;
  void set(Index idx, const RationalFunction &value);
  void set_component(const std::vector<Symbol> &legs, const Expression &value);
  void add(Index idx, const RationalFunction &value);

  bool is_zero() const { return components_.empty(); }
  Alternating operator-() const;
  Alternating scaled(const RationalFunction &c) const;
  friend Alternating operator+(Alternating a, const Alternating &b) {
    a.require_same(b);
    for (const auto &[idx, v] : b.components_)
      a.add(idx, v);
    return a;
  }
  friend Alternating operator-(const Alternating &a, const Alternating &b) { return a + (-b); }
  friend bool operator==(const Alternating &a, const Alternating &b) {
    return a.chart_.same_coordinates(b.chart_) && a.degree_ == b.degree_ && a.components_ == b.components_;
  }

  /// Applies f to every component.
  template <class F> Alternating transformed(F &&f) const {
    Alternating out(chart_, degree_);
    for (const auto &[idx, v] : components_)
      out.set(idx, f(v));
    return out;
  }
  /// Same components on another chart of equal dimension.
  Alternating on_chart(Chart chart) const;

  std::string label(const Index &idx) const;
  std::string to_string() const;
  void require_same(const Alternating &o) const;

private:
  Chart chart_;
  int degree_ = 0;
  Components components_;
};

using Multivector = Alternating<TensorKind::multivector>;
using DifferentialForm = Alternating<TensorKind::form>;

Multivector vector_field(const Chart &chart, const std::vector<RationalFunction> &components);
DifferentialForm one_form(const Chart &chart, const std::vector<RationalFunction> &components);
/// df
DifferentialForm differential(const Chart &chart, const RationalFunction &f);
/// Coordinate basis element d/dq^i (multivector) or dq^i (form).
Multivector coordinate_vector(const Chart &chart, Symbol q);
DifferentialForm coordinate_form(const Chart &chart, Symbol q);

template <TensorKind K> Alternating<K> wedge(const Alternating<K> &a, const Alternating<K> &b);
DifferentialForm exterior_derivative(const DifferentialForm &w);
/// i_X w, contracting the first slot.
DifferentialForm interior_product(const Multivector &X, const DifferentialForm &w);
/// X(f)
RationalFunction directional_derivative(const Multivector &X, const RationalFunction &f);
DifferentialForm lie_derivative(const Multivector &X, const DifferentialForm &w);
Multivector lie_derivative(const Multivector &X, const Multivector &P);
/// Schouten-Nijenhuis bracket, normalized so that [X,Y] is the commutator of
/// vector fields.
Multivector schouten(const Multivector &P, const Multivector &Q);
/// (sharp theta)^a = Lambda^{ab} theta_b
Multivector sharp(const Multivector &lambda, const DifferentialForm &theta);
/// Lambda(alpha, beta) = sum_{a<b} Lambda^{ab} (alpha_a beta_b - alpha_b beta_a)
RationalFunction pairing(const Multivector &lambda, const DifferentialForm &alpha, const DifferentialForm &beta);
/// Component derivative in a chart coordinate.
template <TensorKind K> Alternating<K> partial(const Alternating<K> &T, Symbol v);

using Matrix = std::vector<std::vector<RationalFunction>>;
RationalFunction determinant(const Matrix &m);
/// Gauss-Jordan inverse; nullopt when singular.
std::optional<Matrix> invert(Matrix m);
/// Antisymmetric matrix of a degree-2 tensor.
template <TensorKind K> Matrix component_matrix(const Alternating<K> &T);

/// Coordinate expression of a smooth map between charts, optionally with an
/// explicit inverse and a free parameter symbol.
class CoordMap {
public:
  CoordMap() = default;
  /// `images[j]` is target coordinate j in source coordinates. When an
  /// inverse is given and `verify_inverse` is set, both compositions are
  /// checked against the identity and TensorError is raised on failure.
  CoordMap(Chart source, Chart target, std::vector<RationalFunction> images,
           std::optional<std::vector<RationalFunction>> inverse = std::nullopt,
           std::optional<Symbol> parameter = std::nullopt, const ZeroOptions &options = {},
           bool verify_inverse = true);

  const Chart &source() const { return source_; }
  const Chart &target() const { return target_; }
  const std::vector<RationalFunction> &images() const { return images_; }
  bool has_inverse() const { return inverse_.has_value(); }
  const std::vector<RationalFunction> &inverse() const;
  const std::optional<Symbol> &parameter() const { return parameter_; }
  /// d image_i / d source_j
  const RationalFunction &jacobian(int i, int j) const { return jacobian_[i][j]; }

  /// f o phi for f written in target coordinates.
  RationalFunction pull(const RationalFunction &f) const;
  /// g o phi^{-1} for g written in source coordinates.
  RationalFunction push_point(const RationalFunction &g) const;
  /// `next` after this map.
  CoordMap then(const CoordMap &next) const;
  CoordMap inverted() const;
  std::string to_string() const;

private:
  Chart source_, target_;
  std::vector<RationalFunction> images_;
  std::optional<std::vector<RationalFunction>> inverse_;
  std::optional<Symbol> parameter_;
  Matrix jacobian_;
};

Multivector pushforward(const CoordMap &phi, const Multivector &P);
DifferentialForm pullback(const CoordMap &phi, const DifferentialForm &w);

/// One-parameter family h_s of chart maps forming an action of (R^x, *).
/// The inverse of h_s is h_{1/s}.
class RxAction {
public:
  RxAction() = default;
  RxAction(Chart chart, Symbol parameter, std::vector<RationalFunction> images, const ZeroOptions &options = {});
  /// h_s(t, x) = (s t, x) on a chart with a designated fiber coordinate.
  static RxAction fiber_scaling(const Chart &chart, Symbol parameter);

  const Chart &chart() const { return chart_; }
  Symbol parameter() const { return parameter_; }
  const std::vector<RationalFunction> &images() const { return images_; }
  /// Images with the parameter replaced by `value`.
  std::vector<RationalFunction> images_at(const RationalFunction &value) const;
  /// h_s with inverse h_{1/s}.
  const CoordMap &map() const { return map_; }
  /// h_{1/s} with inverse h_s.
  const CoordMap &inverse_map() const { return inverse_map_; }
  /// Fundamental vector field d/ds h_s at s = 1.
  const Multivector &euler() const { return euler_; }

  /// h_1 = id and h_s o h_r = h_{sr}.
  const Certificate &identity_certificate() const { return identity_; }
  const Certificate &group_law_certificate() const { return group_law_; }
  bool well_formed() const { return identity_.passed() && group_law_.passed(); }

private:
  Chart chart_;
  Symbol parameter_;
  std::vector<RationalFunction> images_;
  CoordMap map_, inverse_map_;
  Multivector euler_;
  Certificate identity_, group_law_;
};

struct HomogeneityReport {
  enum class Status { homogeneous, not_homogeneous, every_degree };
  Status status = Status::every_degree;
  int degree = 0;
  /// h_s^* T = s^k T identically in s.
  Certificate finite;
  /// L_Delta T = k T.
  Certificate infinitesimal;
  std::string residual;

  bool homogeneous_of(int k) const { return status == Status::homogeneous && degree == k; }
  std::string describe() const;
};

/// Degree k with h_s^* T = s^k T. Forms are pulled back along h_s;
/// multivectors are pushed forward along h_{1/s}.
template <TensorKind K>
HomogeneityReport homogeneity_degree(const Alternating<K> &T, const RxAction &h, const ZeroOptions &options = {});

/// Homogeneity of a scalar function: f o h_s = s^k f.
HomogeneityReport homogeneity_degree(const RationalFunction &f, const RxAction &h, const ZeroOptions &options = {});

struct NondegeneracyReport {
  bool even_dimension = false;
  RationalFunction determinant;
  /// Determinant not identically zero.
  Certificate nonvanishing;
  /// Determinant is a constant times a power of the fiber coordinate (or a
  /// nonzero constant), hence nonzero wherever t != 0.
  bool nowhere_zero = false;
  std::string reason;

  bool nondegenerate() const { return even_dimension && nonvanishing.passed(); }
};

NondegeneracyReport nondegenerate(const DifferentialForm &w, const ZeroOptions &options = {});

} // namespace klab
