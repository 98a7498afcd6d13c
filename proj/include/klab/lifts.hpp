#pragma once

#include "klab/kirillov.hpp"

#include <string>
#include <vector>

namespace klab {

struct LiftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Velocity coordinate d_q and momentum coordinate p_q of a base coordinate q.
Symbol velocity_of(Symbol q);
Symbol momentum_of(Symbol q);

/// (q, d_q) and (q, p_q) charts. The fiber coordinate is inherited.
Chart tangent_chart(const Chart &base);
Chart cotangent_chart(const Chart &base);

/// (Th)_s = T(h_s), with the velocities further multiplied by s^k.
RxAction tangent_action(const RxAction &h, int k = 0, const ZeroOptions &options = {});
/// (T*h)_s = s (T h_{1/s})^*, with the momenta further multiplied by s^k.
RxAction phase_action(const RxAction &h, int k = 0, const ZeroOptions &options = {});

/// Complete lift to the tangent chart. For a bivector
/// d_T L = L^{ab} d_a^d_{b'} + (1/2) q'^c d_c L^{ab} d_{a'}^d_{b'}.
Multivector tangent_lift(const Multivector &P);

/// Canonical symplectic form sum dp_q ^ dq on the cotangent chart.
DifferentialForm canonical_symplectic_form(const Chart &base);

struct IntertwineReport {
  /// Th_s o L^# and L^# o T*h_s as velocity components on the cotangent chart.
  std::vector<RationalFunction> tangent_after_sharp;
  std::vector<RationalFunction> sharp_after_phase;
  std::vector<RationalFunction> residual;
  Certificate equality;
  HomogeneityReport homogeneity;

  bool intertwines() const { return equality.passed(); }
};

IntertwineReport intertwine_check(const Multivector &lambda, const RxAction &h, const ZeroOptions &options = {});

enum class LinearBundle { tangent, cotangent };

/// Invariant fiber coordinates on TP or T*P of a trivial bundle:
/// d_t -> d_t/t on TP, p_x -> p_x/t on T*P.
struct LinearIdentification {
  LinearBundle which = LinearBundle::tangent;
  /// From the lifted chart to the invariant chart (same fiber t).
  CoordMap map;
  /// Degree of each new coordinate under the lifted action.
  std::vector<std::pair<std::string, HomogeneityReport>> invariance;

  const Chart &invariant_chart() const { return map.target(); }
  bool passed() const;
};

LinearIdentification linear_rx_identification(LinearBundle which, const RxAction &h, const ZeroOptions &options = {});

struct ReducedMorphism {
  /// Rows: (d_t/t, d_x...) ; columns: (p_t, p_x/t ...). Entries on the base.
  Matrix matrix;
  std::vector<std::string> rows, columns;
  /// Entries free of t before setting t = 1.
  Certificate invariance;
  std::string residual;

  bool reduced() const { return invariance.passed(); }
  std::string to_string() const;
};

/// L^# written in the invariant coordinates of TP and T*P, restricted to t = 1.
ReducedMorphism reduce_trivial(const Multivector &lambda, const ZeroOptions &options = {});

struct TangentAlgebroid {
  /// d_T L in the invariant coordinates (t, x, d_t/t, d_x).
  Multivector lifted;
  Multivector adapted;
  std::vector<Symbol> x_block, y_block;
  AlgebroidReport report;
};

/// The Kirillov algebroid d_T L of a Kirillov structure, brought to the
/// coordinates where the fiber scaling of TP acts on t alone.
TangentAlgebroid tangent_algebroid(const KirillovStructure &k, const ZeroOptions &options = {});

} // namespace klab
