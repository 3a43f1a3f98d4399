#pragma once

// Gaussian approximation of the sup-norm: Gamma_g, Gaussian maxima, the
// Kolmogorov distance and the moment-matched Gaussian-data baseline.

#include "ustatboot/bootstrap.hpp"
#include "ustatboot/kernels.hpp"
#include "ustatboot/matrix.hpp"
#include "ustatboot/random.hpp"
#include "ustatboot/ustat.hpp"

#include <vector>

namespace ustatboot {

/// Covariance of vech(g(X)); rows and columns follow VechIndex.
struct GammaG {
  Index p = 0;
  SymMatrix cov;

  Index p_prime() const noexcept { return p * (p + 1) / 2; }
};

inline constexpr Index kDefaultGammaDimLimit = 60;

/// Sample covariance (divisor n - 1) of the vech'd g values.
GammaG estimate_gamma_g(const std::vector<SymMatrix>& g_values,
                        Index dim_limit = kDefaultGammaDimLimit);

/// Gamma_g for an elliptical law with covariance sigma and kurtosis kappa:
/// (kappa (s_jk s_ml + s_jm s_kl + s_jl s_km) + s_jm s_kl + s_jl s_km) / 4.
GammaG analytic_gamma_g_elliptical(const SymMatrix& sigma, double kappa,
                                   Index dim_limit = kDefaultGammaDimLimit);

/// Cholesky factor with diagonal jitter 1e-10 * max diag, escalated 10x up
/// to three times. Zero diagonals are left as zero rows.
Matrix gamma_factor(const GammaG& gamma);

/// b draws of the max (signed or absolute) of N(0, Gamma_g), ascending.
std::vector<double> sample_z_max(const GammaG& gamma, std::size_t b, Sidedness side,
                                 Restriction restriction, Rng& rng);

/// sup_t |F_a(t) - F_b(t)| over the merged support.
double kolmogorov_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Each replication draws n rows from N(0, sigma), forms U' and returns
/// sqrt(n)/2 * max of (U' - E U') with the given sidedness. Covariance and
/// Kendall kernels only. Ascending.
std::vector<double> naive_gaussian_ustat_draws(const SymMatrix& sigma, Index n,
                                               const Kernel& kernel, std::size_t replications,
                                               Sidedness side, Rng& rng,
                                               std::size_t workers = 1);

}  // namespace ustatboot
