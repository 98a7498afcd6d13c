#pragma once

#include "klab/contact.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace klab {

struct GroupoidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Copies x__L, x__R of an arrow coordinate, used to address a pair of arrows.
Symbol left_copy(Symbol q);
Symbol right_copy(Symbol q);

/// Structure maps of a Lie groupoid in coordinates. Composable pairs and
/// triples are explicit charts with projections; `pair` sends two arrows
/// (written in left and right copies) to the pair chart.
struct GroupoidMaps {
  std::vector<RationalFunction> source, target; // arrows -> units
  std::vector<RationalFunction> unit;           // units -> arrows
  std::vector<RationalFunction> inverse;        // arrows -> arrows
  std::vector<RationalFunction> pr1, pr2, mult; // pairs -> arrows
  std::vector<RationalFunction> pair;           // copies -> pairs
  std::vector<RationalFunction> q1, q2, q3;     // triples -> arrows
};

class CoordGroupoid {
public:
  CoordGroupoid() = default;
  CoordGroupoid(std::string name, Chart arrows, Chart units, Chart pairs, Chart triples, GroupoidMaps maps);

  const std::string &name() const { return name_; }
  const Chart &arrows() const { return arrows_; }
  const Chart &units() const { return units_; }
  const Chart &pairs() const { return pairs_; }
  const Chart &triples() const { return triples_; }
  /// Left copies followed by right copies of the arrow coordinates.
  const Chart &copies() const { return copies_; }
  const GroupoidMaps &maps() const { return maps_; }

  const CoordMap &source() const { return source_; }
  const CoordMap &target() const { return target_; }
  const CoordMap &unit() const { return unit_; }
  const CoordMap &inverse() const { return inverse_; }
  const CoordMap &pr1() const { return pr1_; }
  const CoordMap &pr2() const { return pr2_; }
  const CoordMap &mult() const { return mult_; }
  const CoordMap &pair() const { return pair_; }
  const CoordMap &q1() const { return q1_; }
  const CoordMap &q2() const { return q2_; }
  const CoordMap &q3() const { return q3_; }

  /// Pair-chart images of two arrows given in arrow coordinates of some chart.
  std::vector<RationalFunction> pair_of(const std::vector<RationalFunction> &g,
                                        const std::vector<RationalFunction> &h) const;

private:
  std::string name_;
  Chart arrows_, units_, pairs_, triples_, copies_;
  GroupoidMaps maps_;
  CoordMap source_, target_, unit_, inverse_, pr1_, pr2_, mult_, pair_, q1_, q2_, q3_;
};

/// Images of `f` (written in the coordinates of `chart`) after substituting
/// `values` for those coordinates.
std::vector<RationalFunction> compose(const std::vector<RationalFunction> &f, const Chart &chart,
                                      const std::vector<RationalFunction> &values);

namespace axiom {
inline constexpr const char *composable = "s(g) = t(h) on composable pairs";
inline constexpr const char *pair_chart = "pair(pr1, pr2) = id";
inline constexpr const char *source_unit = "s(1_u) = u";
inline constexpr const char *target_unit = "t(1_u) = u";
inline constexpr const char *source_mult = "s(gh) = s(h)";
inline constexpr const char *target_mult = "t(gh) = t(g)";
inline constexpr const char *left_unit = "1_t(g) g = g";
inline constexpr const char *right_unit = "g 1_s(g) = g";
inline constexpr const char *source_inverse = "s(g^-1) = t(g)";
inline constexpr const char *target_inverse = "t(g^-1) = s(g)";
inline constexpr const char *left_inverse = "g g^-1 = 1_t(g)";
inline constexpr const char *right_inverse = "g^-1 g = 1_s(g)";
inline constexpr const char *triples = "triples are composable";
inline constexpr const char *associativity = "(gh)k = g(hk)";
/// Axioms stating compatibility with the target map.
bool involves_target(std::string_view name);
} // namespace axiom

struct GroupoidReport {
  std::vector<Certificate> axioms;

  bool passed() const;
  std::vector<std::string> failed() const;
  const Certificate *find(std::string_view name) const;
};

/// Symbolic certificates, falling back to at least 32 sampled points.
GroupoidReport verify_groupoid(const CoordGroupoid &G, const ZeroOptions &options = {});

/// R^n x R^n over R^n: s(x,y) = y, t(x,y) = x, (x,y)(y,z) = (x,z).
CoordGroupoid pair_groupoid(int n);
/// (R^x, *) over a point, with coordinate `name`.
CoordGroupoid multiplicative_group(std::string_view name = "r");
/// Lie group over a point. `mult` is written in the pair chart (c, c_2) of
/// the coordinates c and their second copies c_2; `inverse` in c.
CoordGroupoid lie_group(std::string name, const std::vector<std::string> &coords,
                        const std::vector<RationalFunction> &identity, const std::vector<RationalFunction> &mult,
                        const std::vector<RationalFunction> &inverse);
/// A manifold as the groupoid of its identities.
CoordGroupoid unit_groupoid(const Chart &chart);
/// Direct product; the coordinate sets must be disjoint.
CoordGroupoid product(const CoordGroupoid &A, const CoordGroupoid &B);
/// Applies the tangent functor to every structure map.
CoordGroupoid tangent_groupoid(const CoordGroupoid &G);

/// Proved equality of every structure map of two groupoids on the same charts.
Certificate same_groupoid(const CoordGroupoid &A, const CoordGroupoid &B, const ZeroOptions &options = {});

struct CocycleReport {
  RationalFunction b;
  Certificate nonvanishing;
  /// b(g) b(h) = b(gh)
  Certificate multiplicative;
  bool passed() const { return nonvanishing.passed() && multiplicative.passed(); }
};

CocycleReport cocycle_check(const CoordGroupoid &G0, const RationalFunction &b, const ZeroOptions &options = {});

/// h_s as a groupoid morphism, with the base action induced through the units.
struct MorphismReport {
  Certificate action;
  std::vector<RationalFunction> base_action;
  Certificate source, target, multiplication;
  bool passed() const;
  std::vector<Certificate> certificates() const { return {action, source, target, multiplication}; }
};

MorphismReport rx_morphism_check(const CoordGroupoid &G, const RxAction &h, const ZeroOptions &options = {});

/// Action of G0 on M = M0 x N by y0.(sigma(y0), n) = (tau(y0), phi(y0, n)),
/// with an R^x-action on N.
struct GroupoidAction {
  CoordGroupoid base;
  Chart fiber;
  /// phi in the coordinates of base.arrows() and fiber.
  std::vector<RationalFunction> action;
  RxAction scaling;
};

struct ActionReport {
  Certificate anchor;      // p(y0.x) = tau(y0)
  Certificate composition; // y0.(y0'.x) = (y0 y0').x
  Certificate unit;        // 1.x = x
  Certificate equivariance;
  bool passed() const;
  std::vector<Certificate> certificates() const { return {anchor, composition, unit, equivariance}; }
};

ActionReport action_check(const GroupoidAction &A, const ZeroOptions &options = {});

struct SplitGroupoid {
  CoordGroupoid groupoid;
  CoordGroupoid reduced;
  Chart fiber;
  RxAction arrows_action, units_action;
  ActionReport action;
  std::optional<CocycleReport> cocycle;
  GroupoidReport axioms;
  MorphismReport morphism;

  bool passed() const;
};

/// Arrows G0 x N with s = (sigma(y0), n), t = (tau(y0), phi(y0, n)),
/// (y0, n)(y0', n') = (y0 y0', n').
SplitGroupoid t_split(const GroupoidAction &A, const ZeroOptions &options = {});
/// t(y0, g) = (tau(y0), b(y0) g) with h_s(y0, g) = (y0, g s).
SplitGroupoid trivial_split(const CoordGroupoid &G0, const RationalFunction &b, std::string_view fiber = "g",
                            std::string_view parameter = "s", const ZeroOptions &options = {});

struct SplittingReport {
  /// The R^x-action on arrows has no fixed points.
  Certificate freeness;
  std::vector<std::pair<std::string, std::string>> fixed_point;
  /// pi o h_s = pi
  Certificate invariance;
  /// sigma0(pi(y)) is the base part of s(y)
  Certificate fibered;
  /// S^-1 o S = id and S o S^-1 = id
  Certificate left_inverse, right_inverse;
  std::vector<RationalFunction> images;
  bool passed() const;
};

/// S(y) = (pi(y), s(y)) into G0 x_{M0} M, compared against a candidate
/// inverse. Defaults: pi drops the fiber, the inverse is the identity.
SplittingReport splitting_map_check(const SplitGroupoid &G, std::optional<std::vector<RationalFunction>> pi = std::nullopt,
                                    std::optional<std::vector<RationalFunction>> inverse = std::nullopt,
                                    const ZeroOptions &options = {});

/// Cotangent groupoid with its canonical symplectic form and fiber scaling.
struct CotangentGroupoid {
  CoordGroupoid groupoid;
  CoordGroupoid base;
  DifferentialForm omega;
  RxAction scaling;
  /// Positions of momentum coordinates in the unit chart.
  std::vector<int> unit_momenta;
};

/// Pair groupoid on R^n: s(x,y,xi,eta) = (y, -eta), t = (x, xi),
/// (x,y,xi,eta)(y,z,-eta,eta') = (x,z,xi,eta').
CotangentGroupoid cotangent_groupoid_pair(int n, std::string_view parameter = "s");
/// T*G of a Lie group with left and right trivialisations as source and target.
CotangentGroupoid cotangent_group(const CoordGroupoid &group, std::string_view parameter = "s");
CotangentGroupoid product(const CotangentGroupoid &A, const CotangentGroupoid &B, std::string_view parameter = "s");

struct SampleReport {
  int samples = 0;
  bool exact = true;
  double max_residual = 0;
  Certificate certificate;
};

/// <th * th', X . X'> = <th, X> + <th', X'> at sampled composable data.
SampleReport pairing_multiplicativity_check(const CotangentGroupoid &cot, const CoordGroupoid &tangent, int samples,
                                            const ZeroOptions &options = {});
/// w(U.U', V.V') = w(U, V) + w(U', V') at sampled composable data.
SampleReport multiplicative_form_check(const CoordGroupoid &G, const DifferentialForm &omega, int samples,
                                       const ZeroOptions &options = {});

using Point = std::map<Symbol, mpq_class>;

/// Source and target momenta both nonzero.
bool canonical_contact_membership(const CotangentGroupoid &cot, const Point &arrow);

struct ClosureReport {
  int products = 0, inverses = 0, scalings = 0;
  Certificate certificate;
};

ClosureReport closure_check(const CotangentGroupoid &cot, int samples, const ZeroOptions &options = {});

/// Symplectisation of a contact groupoid realised inside a cotangent groupoid:
/// trivial_split of pair(R) x R^x with b = 1/r, the pulled-back canonical form,
/// Psi into T*(pair(R) x R^x) and membership of the images in C(G).
struct DazordReport {
  SplitGroupoid split;
  HomogeneousSymplectic symplectic;
  SampleReport multiplicative;
  EmbeddingReport psi;
  Certificate membership;
  Certificate morphism;
  bool passed() const;
};

DazordReport dazord_pipeline(int samples, const ZeroOptions &options = {});

/// Sampled points of a chart; fiber coordinates never vanish.
std::vector<Point> sample_points(const Chart &chart, int count, std::uint64_t seed);

} // namespace klab
