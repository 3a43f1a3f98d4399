#pragma once

// Elliptical data-generating models and the dependence structures used in
// the simulations.

#include "ustatboot/matrix.hpp"
#include "ustatboot/random.hpp"

namespace ustatboot {

enum class Family { ContaminatedNormal, EllipticT };

/// ContaminatedNormal: N(0, V) with probability 1 - epsilon, N(0, nu^2 V)
/// otherwise. EllipticT: G / sqrt(W / nu), G ~ N(0, V), W ~ chi2(nu).
struct EllipticalModel {
  Family family = Family::ContaminatedNormal;
  double epsilon = 0.0;
  double nu = 1.0;
  SymMatrix v;

  /// Throws DomainError/NotPositiveDefinite when parameters are out of range.
  void validate() const;
  Index p() const noexcept { return v.dim(); }
};

/// epsilon = 0.2, nu = 1.5.
EllipticalModel model_m1(SymMatrix v);
/// nu = 10 unless given.
EllipticalModel model_m2(SymMatrix v, double nu = 10.0);
EllipticalModel model_gaussian(SymMatrix v);

enum class DependenceKind { D1, AR1, Equicorrelation };

struct DependenceSpec {
  DependenceKind kind = DependenceKind::D1;
  Index p = 1;
  /// AR1: lag-one correlation. Equicorrelation: off-diagonal weight.
  double rho = 0.0;

  static DependenceSpec d1(Index p) { return {DependenceKind::D1, p, 0.9}; }
  static DependenceSpec d2(Index p) { return {DependenceKind::AR1, p, 0.7}; }
  static DependenceSpec d3(Index p) { return {DependenceKind::AR1, p, 0.3}; }
  static DependenceSpec ar1(Index p, double rho) { return {DependenceKind::AR1, p, rho}; }
  static DependenceSpec equicorrelation(Index p, double rho) {
    return {DependenceKind::Equicorrelation, p, rho};
  }
};

/// D1: 0.9 * 11^T + 0.1 I. AR1: rho^{|m-k|}. Equicorrelation: rho 11^T + (1-rho) I.
SymMatrix build_v(const DependenceSpec& spec);

/// Zeroes entries with |m - k| > bandwidth.
SymMatrix band_truncate(const SymMatrix& v, Index bandwidth);

/// n independent rows, row i drawn from its own substream of a master seed
/// taken from `rng`.
DataMatrix sample(const EllipticalModel& model, Index n, Rng& rng);

/// ContaminatedNormal: (1 - eps + eps nu^2) V. EllipticT: nu / (nu - 2) V.
SymMatrix population_sigma(const EllipticalModel& model);

/// Elliptical kurtosis parameter.
double kurtosis_kappa(const EllipticalModel& model);

/// Kendall-kernel mean E h for an elliptical law with scale V:
/// 2/pi * asin(rho_mk) + 1, with rho the correlation of V.
SymMatrix population_kendall_mean(const SymMatrix& v);

}  // namespace ustatboot
