#pragma once

#include "klab/lifts.hpp"

#include <string>

namespace klab {

struct ContactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symplectic 2-form on a chart with a fiber coordinate t, together with an
/// R^x-action and its Euler field.
struct HomogeneousSymplectic {
  Chart total;
  DifferentialForm omega;
  RxAction action;
  Certificate closed;
  NondegeneracyReport nondegeneracy;
  HomogeneityReport homogeneity;

  const Multivector &euler() const { return action.euler(); }
  Symbol fiber() const { return *total.fiber(); }
  /// Chart of the remaining coordinates.
  Chart base() const;
  Certificate certificate() const;
  bool certified() const { return certificate().passed(); }
};

HomogeneousSymplectic homogeneous_symplectic(DifferentialForm omega, RxAction action, const ZeroOptions &options = {});

/// omega = dt ^ alpha + t d(alpha) on (t, x) with the fiber scaling action.
HomogeneousSymplectic symplectise(const DifferentialForm &alpha, std::string_view fiber = "t",
                                  std::string_view parameter = "s", const ZeroOptions &options = {});

struct ContactReport {
  int n = 0;
  /// Some coefficient of alpha is not identically zero.
  Certificate nonvanishing;
  /// Primary criterion: the symplectisation is nondegenerate.
  NondegeneracyReport symplectic;
  /// Cross-check: top coefficient of alpha ^ (d alpha)^n.
  RationalFunction volume_coefficient;
  Certificate volume;

  bool agree() const { return symplectic.nondegenerate() == volume.passed(); }
  bool contact() const { return nonvanishing.passed() && symplectic.nondegenerate() && volume.passed(); }
};

ContactReport is_contact_form(const DifferentialForm &alpha, const ZeroOptions &options = {});

struct RecoveryReport {
  Certificate preconditions;
  /// i_E omega
  DifferentialForm contraction;
  /// No dt-leg, and contraction / t free of t.
  Certificate basic;
  /// Defined when both certificates pass.
  std::optional<DifferentialForm> alpha;

  bool recovered() const { return alpha.has_value(); }
};

RecoveryReport recover_alpha(const HomogeneousSymplectic &H, const ZeroOptions &options = {});

struct EmbeddingReport {
  Certificate preconditions;
  /// eta = omega^flat(E) = i_E omega
  DifferentialForm eta;
  Certificate basic;
  /// (t, x) -> (x, p_b = eta_b) into the cotangent chart of the base.
  std::optional<CoordMap> psi;
  /// psi^* (sum dp_b ^ dx^b) = omega
  Certificate pullback;

  bool embedded() const { return preconditions.passed() && basic.passed() && pullback.passed(); }
};

EmbeddingReport psi_embedding(const HomogeneousSymplectic &H, const ZeroOptions &options = {});

/// omega^flat(X) = i_X omega
DifferentialForm flat(const DifferentialForm &omega, const Multivector &X);
/// The bivector L with L^# o omega^flat = id. Throws ContactError when omega is degenerate.
Multivector inverse_bivector(const DifferentialForm &omega);

} // namespace klab
