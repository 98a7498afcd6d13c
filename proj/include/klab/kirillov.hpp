#pragma once

#include "klab/tensor.hpp"

#include <map>
#include <tuple>
#include <string>
#include <vector>

namespace klab {

struct KirillovError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Local Kirillov (Jacobi) bracket data on a base chart: a bivector
/// Lambda^{ab}(x) and a vector field Lambda^a(x).
class JacobiPair {
public:
  JacobiPair() = default;
  JacobiPair(Multivector bivector, Multivector field);
  /// The zero pair on `base`.
  static JacobiPair zero(const Chart &base);

  const Chart &base() const { return bivector_.chart(); }
  const Multivector &bivector() const { return bivector_; }
  const Multivector &field() const { return field_; }

private:
  Multivector bivector_;
  Multivector field_;
};

/// Degree -1 Poisson structure on the total chart (t, x) with the fiber
/// scaling action. Construction never fails on a non-Poisson input; the
/// certificates record the outcome.
struct KirillovStructure {
  Chart total;
  Multivector lambda;
  RxAction action;
  /// [Lambda, Lambda] on the total chart.
  Multivector jacobiator;
  Certificate poisson;
  HomogeneityReport homogeneity;

  Symbol fiber() const { return *total.fiber(); }
  bool certified() const {
    return poisson.passed() && (homogeneity.homogeneous_of(-1) ||
                                homogeneity.status == HomogeneityReport::Status::every_degree);
  }
};

/// Wraps an arbitrary bivector on a chart with a fiber coordinate.
KirillovStructure kirillov_structure(Multivector lambda, Symbol parameter, const ZeroOptions &options = {});

/// Lambda(x,t) = (1/2t) Lambda^{ab} d_a^d_b + Lambda^a d_t^d_a on (t, x).
KirillovStructure poissonise(const JacobiPair &pair, std::string_view fiber = "t", std::string_view parameter = "s",
                             const ZeroOptions &options = {});

/// [f,g] = Lambda^{ab} d_a f d_b g + Lambda^a (f d_a g - d_a f g)
RationalFunction kirillov_bracket(const JacobiPair &pair, const RationalFunction &f, const RationalFunction &g);

/// t u(x) on the total chart.
RationalFunction iota(const RationalFunction &u, const KirillovStructure &k);

/// {F,G} = Lambda(dF, dG).
RationalFunction poisson_bracket(const KirillovStructure &k, const RationalFunction &F, const RationalFunction &G);

struct E1Report {
  RationalFunction lhs; // iota of the Kirillov bracket
  RationalFunction rhs; // Poisson bracket of the iotas
  ZeroVerdict verdict;  // of lhs - rhs
};

E1Report check_e1(const JacobiPair &pair, const RationalFunction &u, const RationalFunction &v,
                  const ZeroOptions &options = {});

struct JacobiReport {
  /// Combined verdict over the components of [Lambda, Lambda] of the poissonisation.
  ZeroVerdict verdict;
  Multivector residual;
  /// [Lambda^{ab}, Lambda^{ab}] for the bivector part alone, on the base chart.
  Multivector base_residual;
  bool jacobi() const { return verdict.is_zero(); }
};

JacobiReport is_jacobi(const JacobiPair &pair, const ZeroOptions &options = {});

/// Combined verdict over all components of a tensor.
template <TensorKind K> ZeroVerdict tensor_is_zero(const Alternating<K> &T, const ZeroOptions &options);

struct CoisotropicReport {
  Certificate bivector_block; // Lambda^{ij} on y = 0
  Certificate field_block;    // Lambda^{i} on y = 0
  bool coisotropic() const { return bivector_block.passed() && field_block.passed(); }
};

/// S = {y = 0} for the listed vanishing coordinates.
CoisotropicReport coisotropic_check(const KirillovStructure &k, const std::vector<Symbol> &vanishing,
                                    const ZeroOptions &options = {});

/// X_h = Lambda^#(dh), so that X_h(g) = {g, h} = -{h, g}.
Multivector hamiltonian_vf(const KirillovStructure &k, const RationalFunction &h);

struct AlgebroidReport {
  std::vector<Certificate> checks;
  std::string failed_block;
  /// Lambda^{i alpha}, keyed by (y index i, x index alpha) within the blocks.
  std::map<std::pair<int, int>, RationalFunction> mixed;
  /// Lambda_k^{ij} for i < j, keyed by (k, i, j).
  std::map<std::tuple<int, int, int>, RationalFunction> linear;
  /// Lambda^i
  std::map<int, RationalFunction> anchor;

  bool passed() const;
};

/// Checks Lambda = (1/t) L^{ia}(x) d_{x^a}^d_{y^i} + (1/2t) y^k L_k^{ij}(x) d_{y^j}^d_{y^i}
/// + L^i(x) d_{y^i}^d_t on a chart split into the fiber t, base block x and
/// linear block y, and extracts the structure functions.
AlgebroidReport algebroid_form_check(const Multivector &lambda, const std::vector<Symbol> &x_block,
                                     const std::vector<Symbol> &y_block, const ZeroOptions &options = {});

} // namespace klab
