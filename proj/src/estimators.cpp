#include "ustatboot/estimators.hpp"

#include "ustatboot/error.hpp"
#include "ustatboot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ustatboot {

SymMatrix threshold_cov(const SymMatrix& s_hat, double tau) {
  if (!(tau >= 0.0)) throw DomainError("threshold_cov: tau must be >= 0");
  Matrix out = s_hat.matrix();
  out = (out.array().abs() > tau).select(out, 0.0);
  return trusted_symmetric(std::move(out));
}

double select_tau_star(const QuantileEstimate& q, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("select_tau_star: beta must lie in (0, 1]");
  return q.value / beta;
}

ThresholdedCov threshold_with_bootstrap(const SymMatrix& s_hat, const BootstrapDraws& draws,
                                        double alpha, double beta) {
  const double tau = select_tau_star(quantile(draws, 1.0 - alpha), beta);
  return {threshold_cov(s_hat, tau), tau, beta, alpha};
}

ErrorMetrics error_metrics(const SymMatrix& estimate, const SymMatrix& truth) {
  if (estimate.dim() != truth.dim()) throw DimensionError("error_metrics: dimension mismatch");
  const SymMatrix diff = estimate - truth;
  const double f = frobenius_norm(diff);
  return {spectral_norm(diff), f * f / static_cast<double>(diff.dim()), sup_norm(diff)};
}

namespace {

void check_bound_args(double zeta, double a, double beta, double r) {
  if (!(zeta >= 0.0 && a >= 0.0)) throw DomainError("threshold bound: zeta and a must be >= 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("threshold bound: beta must lie in (0, 1]");
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("threshold bound: r must lie in [0, 1)");
  if (r > 0.0 && beta == 1.0) throw DomainError("threshold bound: beta = 1 requires r = 0");
}

double ratio_term(double beta, double r) {
  return r == 0.0 ? 1.0 : std::pow(beta / (1.0 - beta), r);
}

}  // namespace

double threshold_spectral_bound(double zeta, double a, double beta, double r) {
  check_bound_args(zeta, a, beta, r);
  return ((3.0 + 2.0 * beta) / std::pow(beta, 1.0 - r) + ratio_term(beta, r)) * zeta *
         std::pow(a, 1.0 - r);
}

double threshold_frobenius_bound(double zeta, double a, double beta, double r) {
  check_bound_args(zeta, a, beta, r);
  return 2.0 *
         ((4.0 + 3.0 * beta * beta) / std::pow(beta, 2.0 - r) + 2.0 * ratio_term(beta, r)) *
         zeta * std::pow(a, 2.0 - r);
}

double row_sparsity(const SymMatrix& m) {
  return static_cast<double>((m.matrix().array() != 0.0).cast<Index>().rowwise().sum().maxCoeff());
}

LinFunSolution solve_dantzig_linfun(const SymMatrix& s_hat, const Vector& b, double lambda,
                                    const LpOptions& options) {
  const Index p = s_hat.dim();
  if (b.size() != p) throw DimensionError("solve_dantzig_linfun: b length does not match S");
  if (!(lambda >= 0.0)) throw DomainError("solve_dantzig_linfun: lambda must be >= 0");

  // Variables (w+, w-); rows S w <= b + lambda, then S w >= b - lambda.
  LpProblem lp;
  lp.objective = Vector::Ones(2 * p);
  lp.a.resize(2 * p, 2 * p);
  lp.a << s_hat.matrix(), -s_hat.matrix(), s_hat.matrix(), -s_hat.matrix();
  lp.rhs.resize(2 * p);
  lp.rhs << (b.array() + lambda).matrix(), (b.array() - lambda).matrix();
  lp.sense.assign(static_cast<std::size_t>(p), ConstraintSense::LessEqual);
  lp.sense.resize(static_cast<std::size_t>(2 * p), ConstraintSense::GreaterEqual);

  const LpSolution sol = solve_lp(lp, options);
  LinFunSolution out;
  out.lambda = lambda;
  out.status = sol.status;
  if (sol.status != LpStatus::Optimal) {
    out.theta = Vector::Zero(p);
    return out;
  }
  out.theta = sol.x.head(p) - sol.x.tail(p);
  out.l1 = out.theta.lpNorm<1>();
  const double slack = (s_hat.matrix() * out.theta - b).lpNorm<Eigen::Infinity>() - lambda;
  out.feasible = slack <= options.feasibility_tolerance * std::max(1.0, b.lpNorm<Eigen::Infinity>());
  return out;
}

bool ClimeResult::feasible() const {
  return std::all_of(column_feasible.begin(), column_feasible.end(), [](bool f) { return f; });
}

ClimeResult solve_clime(const SymMatrix& s_hat, double lambda, std::size_t workers,
                        const LpOptions& options) {
  const Index p = s_hat.dim();
  Matrix raw = Matrix::Zero(p, p);
  std::vector<char> ok(static_cast<std::size_t>(p), 0);
  parallel_for(static_cast<std::size_t>(p), workers, [&](std::size_t k) {
    const LinFunSolution col =
        solve_dantzig_linfun(s_hat, Vector::Unit(p, static_cast<Index>(k)), lambda, options);
    if (col.feasible) raw.col(static_cast<Index>(k)) = col.theta;
    ok[k] = col.feasible ? 1 : 0;
  });
  Matrix sym(p, p);
  for (Index m = 0; m < p; ++m) {
    for (Index k = 0; k < p; ++k) {
      // Equal magnitudes resolve to the lower-triangle entry on both sides.
      const double lower = raw(std::max(m, k), std::min(m, k));
      const double upper = raw(std::min(m, k), std::max(m, k));
      sym(m, k) = std::abs(upper) < std::abs(lower) ? upper : lower;
    }
  }
  ClimeResult out{trusted_symmetric(std::move(sym)), {}};
  out.column_feasible.assign(ok.begin(), ok.end());
  return out;
}

ClimeBounds clime_rate_bounds(double zeta, double m, double a, double r) {
  if (!(zeta >= 0.0 && m > 0.0 && a >= 0.0)) {
    throw DomainError("clime_rate_bounds: need zeta >= 0, m > 0, a >= 0");
  }
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("clime_rate_bounds: r must lie in [0, 1)");
  const double c_r =
      std::pow(2.0, 3.0 - 2.0 * r) * (1.0 + std::pow(2.0, 1.0 - r) + std::pow(3.0, 1.0 - r));
  return {4.0 * m * m * a, c_r * zeta * std::pow(m, 2.0 - 2.0 * r) * std::pow(a, 1.0 - r),
          4.0 * c_r * zeta * std::pow(m, 4.0 - 2.0 * r) * std::pow(a, 2.0 - r)};
}

double linfun_rate_bound(double w, double zeta, double m, double sigma_inv_l1, double a,
                         double r) {
  if (!(w >= 1.0)) throw DomainError("linfun_rate_bound: w must be >= 1");
  if (!(zeta >= 0.0 && m > 0.0 && sigma_inv_l1 > 0.0 && a >= 0.0)) {
    throw DomainError("linfun_rate_bound: invalid scale arguments");
  }
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("linfun_rate_bound: r must lie in [0, 1)");
  const double inv_w = std::isinf(w) ? 0.0 : 1.0 / w;
  const double e = 1.0 - r * inv_w;
  return 2.0 * std::pow(6.0, inv_w) * std::pow(5.0, (1.0 - r) * inv_w) * std::pow(zeta, inv_w) *
         std::pow(m * sigma_inv_l1, e) * std::pow(a, e);
}

double select_lambda_star(const QuantileEstimate& q, double m_bound) {
  if (!(m_bound > 0.0)) throw DomainError("select_lambda_star: bound must be > 0");
  return m_bound * q.value;
}

double smallness_measure(const Vector& theta, double u) {
  if (!(u >= 0.0)) throw DomainError("smallness_measure: u must be >= 0");
  return theta.cwiseAbs().cwiseMin(u).sum();
}

Index support_size(const Vector& x) {
  return (x.array().abs() >= kSupportTolerance).cast<Index>().sum();
}

}  // namespace ustatboot
