#include "ustatboot/gaussian_approx.hpp"

#include "ustatboot/distributions.hpp"
#include "ustatboot/error.hpp"
#include "ustatboot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ustatboot {

namespace {

void check_dim_limit(Index p, Index limit, const char* what) {
  if (p > limit) {
    throw DomainError(std::string(what) + ": p = " + std::to_string(p) +
                      " exceeds the Gamma_g dimension limit " + std::to_string(limit) +
                      "; use the bootstrap for larger p");
  }
}

// Factor of a PSD matrix. Coordinates with zero variance get zero rows; the
// rest go through Cholesky with escalating diagonal jitter.
Matrix psd_factor(const Matrix& a) {
  const Index d = a.rows();
  std::vector<Index> live;
  for (Index i = 0; i < d; ++i) {
    if (a(i, i) < 0.0) throw NotPositiveDefinite("psd_factor: negative diagonal entry", i);
    if (a(i, i) > 0.0) live.push_back(i);
  }
  Matrix out = Matrix::Zero(d, d);
  if (live.empty()) return out;
  const auto k = static_cast<Index>(live.size());
  Matrix sub(k, k);
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c < k; ++c) sub(r, c) = a(live[r], live[c]);
  }
  const double base = sub.diagonal().maxCoeff();
  Matrix l;
  double jitter = 0.0;
  for (int attempt = 0;; ++attempt) {
    try {
      Matrix trial = sub;
      trial.diagonal().array() += jitter;
      l = cholesky(trusted_symmetric(std::move(trial)));
      break;
    } catch (const NotPositiveDefinite& e) {
      if (attempt == 3) {
        throw NotPositiveDefinite("psd_factor: not positive semidefinite after jitter",
                                  live[static_cast<std::size_t>(e.pivot())]);
      }
      jitter = base * 1e-10 * std::pow(10.0, attempt);
    }
  }
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c <= r; ++c) out(live[r], live[c]) = l(r, c);
  }
  return out;
}

}  // namespace

GammaG estimate_gamma_g(const std::vector<SymMatrix>& g_values, Index dim_limit) {
  if (g_values.size() < 2) throw SampleSizeError("estimate_gamma_g: need at least 2 values");
  const Index p = g_values.front().dim();
  check_dim_limit(p, dim_limit, "estimate_gamma_g");
  const VechIndex vi(p);
  Matrix rows(static_cast<Index>(g_values.size()), vi.size());
  for (std::size_t i = 0; i < g_values.size(); ++i) {
    if (g_values[i].dim() != p) throw DimensionError("estimate_gamma_g: mixed dimensions");
    rows.row(static_cast<Index>(i)) = vech(g_values[i]).transpose();
  }
  const Vector mean = rows.colwise().mean();
  const Matrix centered = rows.rowwise() - mean.transpose();
  Matrix cov = centered.transpose() * centered;
  cov /= static_cast<double>(rows.rows() - 1);
  return {p, trusted_symmetric(std::move(cov))};
}

GammaG analytic_gamma_g_elliptical(const SymMatrix& sigma, double kappa, Index dim_limit) {
  const Index p = sigma.dim();
  check_dim_limit(p, dim_limit, "analytic_gamma_g_elliptical");
  const VechIndex vi(p);
  const Index d = vi.size();
  Matrix cov(d, d);
  for (Index a = 0; a < d; ++a) {
    const auto [j, k] = vi.pair(a);
    for (Index b = 0; b < d; ++b) {
      const auto [m, l] = vi.pair(b);
      const double jk_ml = sigma(j, k) * sigma(m, l);
      const double jm_kl = sigma(j, m) * sigma(k, l);
      const double jl_km = sigma(j, l) * sigma(k, m);
      cov(a, b) = (kappa * (jk_ml + jm_kl + jl_km) + jm_kl + jl_km) / 4.0;
    }
  }
  return {p, SymMatrix(std::move(cov))};
}

Matrix gamma_factor(const GammaG& gamma) { return psd_factor(gamma.cov.matrix()); }

std::vector<double> sample_z_max(const GammaG& gamma, std::size_t b, Sidedness side,
                                 Restriction restriction, Rng& rng) {
  if (b < 1) throw DomainError("sample_z_max: need b >= 1");
  const VechIndex vi(gamma.p);
  std::vector<Index> coords;
  for (Index c = 0; c < vi.size(); ++c) {
    if (restriction == Restriction::All || !vi.is_diagonal(c)) coords.push_back(c);
  }
  if (coords.empty()) throw DomainError("sample_z_max: no coordinates selected");
  const Matrix l = gamma_factor(gamma);
  const Matrix e = multiplier_matrix(vi.size(), b, rng.next_u64());
  Matrix z = l * e;
  std::vector<double> out(b);
  for (std::size_t d = 0; d < b; ++d) {
    double best = -std::numeric_limits<double>::infinity();
    for (Index c : coords) {
      const double v = z(c, static_cast<Index>(d));
      best = std::max(best, side == Sidedness::SignedMax ? v : std::abs(v));
    }
    out[d] = best;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double kolmogorov_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw DomainError("kolmogorov_distance: empty sample");
  std::vector<double> x = a;
  std::vector<double> y = b;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      t = x[i];
    } else {
      t = y[j];
    }
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return best;
}

std::vector<double> naive_gaussian_ustat_draws(const SymMatrix& sigma, Index n,
                                               const Kernel& kernel, std::size_t replications,
                                               Sidedness side, Rng& rng, std::size_t workers) {
  if (n < 2) throw SampleSizeError("naive_gaussian_ustat_draws: need n >= 2");
  if (replications < 1) throw DomainError("naive_gaussian_ustat_draws: need replications >= 1");
  if (kernel.p() != sigma.dim()) {
    throw DimensionError("naive_gaussian_ustat_draws: kernel and sigma dimensions differ");
  }
  SymMatrix mean_h;
  switch (kernel.kind()) {
    case KernelKind::Covariance:
      mean_h = sigma;
      break;
    case KernelKind::KendallTau:
      mean_h = population_kendall_mean(sigma);
      break;
    case KernelKind::Custom:
      throw DomainError("naive_gaussian_ustat_draws: custom kernels have no known E h");
  }
  const Matrix l = psd_factor(sigma.matrix());
  const Index p = sigma.dim();
  const Rng root(rng.next_u64());
  std::vector<double> out(replications);
  parallel_for(replications, workers, [&](std::size_t r) {
    Rng stream = root.substream(r);
    Matrix z(n, p);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < p; ++k) z(i, k) = stream.normal();
    }
    const UStatResult u = compute_u(DataMatrix(z * l.transpose()), kernel);
    out[r] = sup_stat(u, mean_h, false, side);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ustatboot
