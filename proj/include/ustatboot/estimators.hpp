#pragma once

// Bootstrap-tuned regularized estimators: hard-thresholded covariance,
// CLIME precision matrix and the Dantzig-type linear functional.

#include "ustatboot/bootstrap.hpp"
#include "ustatboot/lp.hpp"
#include "ustatboot/matrix.hpp"

#include <vector>

namespace ustatboot {

/// Entrywise s * 1{|s| > tau}.
SymMatrix threshold_cov(const SymMatrix& s_hat, double tau);

struct ThresholdedCov {
  SymMatrix estimate;
  double tau = 0.0;
  double beta = 1.0;
  double alpha = 0.0;
};

/// tau* = q.value / beta, beta in (0, 1].
double select_tau_star(const QuantileEstimate& q, double beta);

/// Thresholds s_hat at tau* built from the (1 - alpha) bootstrap quantile.
ThresholdedCov threshold_with_bootstrap(const SymMatrix& s_hat, const BootstrapDraws& draws,
                                        double alpha, double beta);

struct ErrorMetrics {
  double spectral = 0.0;
  double frob_per_p = 0.0;
  double sup = 0.0;
};

ErrorMetrics error_metrics(const SymMatrix& estimate, const SymMatrix& truth);

/// Deterministic spectral-norm bound for thresholding on the event
/// |S - Sigma|_max <= a, with a = beta * tau:
///   [(3 + 2 beta) / beta^{1-r} + (beta / (1 - beta))^r] zeta a^{1-r}.
/// The (beta / (1 - beta))^r factor is 1 when r = 0.
double threshold_spectral_bound(double zeta, double a, double beta, double r = 0.0);

/// Matching Frobenius bound on p^{-1} |.|_F^2:
///   2 [(4 + 3 beta^2) / beta^{2-r} + 2 (beta / (1 - beta))^r] zeta a^{2-r}.
double threshold_frobenius_bound(double zeta, double a, double beta, double r = 0.0);

/// Largest number of nonzero entries in any row.
double row_sparsity(const SymMatrix& m);

struct LinFunSolution {
  Vector theta;
  double lambda = 0.0;
  double l1 = 0.0;
  bool feasible = false;
  LpStatus status = LpStatus::Infeasible;
};

/// min |w|_1 subject to |S w - b|_inf <= lambda.
LinFunSolution solve_dantzig_linfun(const SymMatrix& s_hat, const Vector& b, double lambda,
                                    const LpOptions& options = {});

struct ClimeResult {
  SymMatrix omega;
  std::vector<bool> column_feasible;

  bool feasible() const;
};

/// Column-wise min |theta|_1 s.t. |S theta - e_k|_inf <= lambda, symmetrized
/// by keeping the entry of smaller magnitude. Infeasible columns are zero.
ClimeResult solve_clime(const SymMatrix& s_hat, double lambda, std::size_t workers = 1,
                        const LpOptions& options = {});

struct ClimeBounds {
  double sup = 0.0;
  double spectral = 0.0;
  double frob_per_p = 0.0;
};

/// CLIME error bounds on the event |S - Sigma|_max <= a with lambda = m a,
/// |Omega|_{L1} <= m: sup 4 m lambda, spectral C_r zeta m^{2-2r} a^{1-r},
/// Frobenius 4 C_r zeta m^{4-2r} a^{2-r}, C_r = 2^{3-2r} (1 + 2^{1-r} + 3^{1-r}).
ClimeBounds clime_rate_bounds(double zeta, double m, double a, double r = 0.0);

/// Linear-functional error bound in the l_w norm, w in [1, inf]:
///   2 6^{1/w} 5^{(1-r)/w} zeta^{1/w} (m |Sigma^{-1}|_{L1})^{1-r/w} a^{1-r/w}.
double linfun_rate_bound(double w, double zeta, double m, double sigma_inv_l1, double a,
                         double r = 0.0);

/// lambda* = m_bound * q.value, m_bound > 0.
double select_lambda_star(const QuantileEstimate& q, double m_bound);

/// sum_j min(|theta_j|, u).
double smallness_measure(const Vector& theta, double u);

/// Entries with |x| < kSupportTolerance count as zero in support reports.
inline constexpr double kSupportTolerance = 1e-10;
Index support_size(const Vector& x);

}  // namespace ustatboot
