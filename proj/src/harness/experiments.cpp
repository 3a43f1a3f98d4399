#include "ustatboot/harness/experiments.hpp"

#include "ustatboot/bootstrap.hpp"
#include "ustatboot/error.hpp"
#include "ustatboot/estimators.hpp"
#include "ustatboot/gaussian_approx.hpp"
#include "ustatboot/inference.hpp"
#include "ustatboot/parallel.hpp"
#include "ustatboot/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ustatboot::harness {

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("CsvTable: no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::values(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("loglog_slope: need two or more paired points");
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double k = static_cast<double>(x.size());
  const double mx = sx / k, my = sy / k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double empirical_cdf(const std::vector<double>& sorted, double t) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

namespace {

constexpr std::uint64_t kTruthChannel = 1;
constexpr std::uint64_t kNaiveChannel = 2;
constexpr std::uint64_t kHajekChannel = 3;
constexpr std::uint64_t kGaussianChannel = 4;

std::size_t workers_of(const ExperimentConfig& c) { return static_cast<std::size_t>(c.workers); }
std::size_t reps_of(const ExperimentConfig& c) { return static_cast<std::size_t>(c.replications); }
std::size_t b_of(const ExperimentConfig& c) { return static_cast<std::size_t>(c.bootstrap_b); }

Rng channel(const ExperimentConfig& c, std::uint64_t ch, std::size_t r) {
  return Rng(c.seed).substream(ch).substream(r);
}

/// Population mean of the configured kernel under the configured model.
SymMatrix kernel_mean(const ExperimentConfig& c, const EllipticalModel& m) {
  if (c.kernel == "covariance") return population_sigma(m);
  if (c.kernel == "kendall") return population_kendall_mean(m.v);
  return SymMatrix::constant(m.p(), 1.0);
}

void require_covariance_kernel(const ExperimentConfig& c, const char* what) {
  if (c.kernel != "covariance") {
    throw ConfigError(std::string(what) + " supports only the covariance kernel");
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double fraction(const std::vector<char>& flags) {
  double s = 0.0;
  for (char f : flags) s += f ? 1.0 : 0.0;
  return flags.empty() ? 0.0 : s / static_cast<double>(flags.size());
}

struct SplitRep {
  DataMatrix main;
  DataMatrix train;
};

SplitRep simulate_split(const EllipticalModel& model, long n, Rng& rng) {
  const DataMatrix data = sample(model, 2 * static_cast<Index>(n), rng);
  auto [main, train] = split_sample(data, rng);
  return {std::move(main), std::move(train)};
}

std::vector<double> sorted_abs_scaled(std::vector<double> v, double scale) {
  for (double& x : v) x *= scale;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

ExperimentOutput run_pp_plot(const ExperimentConfig& c) {
  const EllipticalModel model = build_model(c.model, c.p);
  const Kernel kernel = build_kernel(c.kernel, c.p);
  const SymMatrix truth = kernel_mean(c, model);
  const bool raw = c.scaling == "raw";
  const std::size_t reps = reps_of(c);
  const std::size_t levels = c.alpha_grid.size();

  std::vector<double> z_quantiles;
  if (c.gaussian_reference) {
    require_covariance_kernel(c, "gaussian_reference");
    const GammaG gamma = analytic_gamma_g_elliptical(population_sigma(model), kurtosis_kappa(model),
                                                     static_cast<Index>(c.gamma_dim_limit));
    Rng zr = Rng(c.seed).substream(kGaussianChannel);
    std::vector<double> z =
        sample_z_max(gamma, static_cast<std::size_t>(c.z_draws),
                     raw ? Sidedness::SignedMax : Sidedness::AbsMax, Restriction::All, zr);
    // ||U - EU|| is approximately 2 n^{-1/2} max |Z|.
    if (!raw) z = sorted_abs_scaled(std::move(z), 2.0 / std::sqrt(static_cast<double>(c.n)));
    for (double a : c.alpha_grid) z_quantiles.push_back(sorted_quantile(z, a));
  }

  std::vector<std::vector<char>> covered(reps, std::vector<char>(levels, 0));
  std::vector<std::vector<char>> covered_z(reps, std::vector<char>(levels, 0));
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng rng = channel(c, kTruthChannel, r);
    const SplitRep s = simulate_split(model, c.n, rng);
    const UStatResult u = compute_u(s.main, kernel);
    const double stat = raw ? sup_stat(u, truth, false, Sidedness::SignedMax)
                            : sup_norm(u.u - truth);
    const DecoupledGEstimates g = estimate_g_decoupled(s.main, s.train, kernel);
    const BootstrapDraws draws =
        draw_bootstrap(g, b_of(c), raw ? BootstrapScaling::Raw : BootstrapScaling::Applications,
                       Restriction::All, rng);
    for (std::size_t k = 0; k < levels; ++k) {
      covered[r][k] = stat <= quantile(draws, c.alpha_grid[k]).value;
      if (!z_quantiles.empty()) covered_z[r][k] = stat <= z_quantiles[k];
    }
  });

  ExperimentOutput out;
  out.table.header = {"alpha", "coverage"};
  if (!z_quantiles.empty()) out.table.header.push_back("coverage_gaussian");
  double max_dev = 0.0, max_dev_z = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    double hit = 0.0, hit_z = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      hit += covered[r][k];
      hit_z += covered_z[r][k];
    }
    const double cov = hit / static_cast<double>(reps);
    std::vector<double> row{c.alpha_grid[k], cov};
    max_dev = std::max(max_dev, std::abs(cov - c.alpha_grid[k]));
    if (!z_quantiles.empty()) {
      const double cz = hit_z / static_cast<double>(reps);
      row.push_back(cz);
      max_dev_z = std::max(max_dev_z, std::abs(cz - c.alpha_grid[k]));
    }
    out.table.rows.push_back(std::move(row));
  }
  out.summary = {{"max_abs_deviation", max_dev}, {"replications", reps}};
  if (!z_quantiles.empty()) out.summary["max_abs_deviation_gaussian"] = max_dev_z;
  return out;
}

ExperimentOutput run_naive_vs_hajek(const ExperimentConfig& c) {
  require_covariance_kernel(c, "naive_vs_hajek");
  const EllipticalModel model = build_model(c.model, c.p);
  const SymMatrix sigma = population_sigma(model);
  const Kernel kernel = Kernel::covariance(static_cast<Index>(c.p));
  const Sidedness side = c.sidedness == "signed" ? Sidedness::SignedMax : Sidedness::AbsMax;
  const std::size_t reps = reps_of(c);
  const auto n = static_cast<Index>(c.n);
  const double root_n = std::sqrt(static_cast<double>(n));

  std::vector<double> t_draws(reps), hajek(reps);
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng rt = channel(c, kTruthChannel, r);
    t_draws[r] = sup_stat(compute_u(sample(model, n, rt), kernel), sigma, false, side);
    // Leading term n^{-1/2} sum_i g(X_i) with g(x) = (x x^T - Sigma) / 2, on fresh data.
    Rng rh = channel(c, kHajekChannel, r);
    const DataMatrix x = sample(model, n, rh);
    Matrix lead = x.rows().transpose() * x.rows() - static_cast<double>(n) * sigma.matrix();
    lead /= 2.0 * root_n;
    hajek[r] = max_entry(SymMatrix(std::move(lead)), side);
  });
  std::sort(t_draws.begin(), t_draws.end());
  std::sort(hajek.begin(), hajek.end());
  Rng rn = Rng(c.seed).substream(kNaiveChannel);
  const std::vector<double> naive =
      naive_gaussian_ustat_draws(sigma, n, kernel, reps, side, rn, workers_of(c));

  std::vector<double> gaussian;
  if (c.gaussian_reference) {
    const GammaG gamma = analytic_gamma_g_elliptical(sigma, kurtosis_kappa(model),
                                                     static_cast<Index>(c.gamma_dim_limit));
    Rng rz = Rng(c.seed).substream(kGaussianChannel);
    gaussian = sample_z_max(gamma, static_cast<std::size_t>(c.z_draws), side, Restriction::All, rz);
  }

  double lo = std::min({t_draws.front(), naive.front(), hajek.front()});
  double hi = std::max({t_draws.back(), naive.back(), hajek.back()});
  if (!gaussian.empty()) {
    lo = std::min(lo, gaussian.front());
    hi = std::max(hi, gaussian.back());
  }
  ExperimentOutput out;
  out.table.header = {"grid", "cdf_T", "cdf_naive", "cdf_hajek"};
  if (!gaussian.empty()) out.table.header.push_back("cdf_gaussian");
  const auto points = static_cast<std::size_t>(c.grid_points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? hi
                                 : lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(points - 1);
    std::vector<double> row{t, empirical_cdf(t_draws, t), empirical_cdf(naive, t),
                            empirical_cdf(hajek, t)};
    if (!gaussian.empty()) row.push_back(empirical_cdf(gaussian, t));
    out.table.rows.push_back(std::move(row));
  }
  out.summary = {{"ks_naive", kolmogorov_distance(t_draws, naive)},
                 {"ks_hajek", kolmogorov_distance(t_draws, hajek)},
                 {"replications", reps}};
  if (!gaussian.empty()) out.summary["ks_gaussian"] = kolmogorov_distance(t_draws, gaussian);
  return out;
}

ExperimentOutput run_coverage(const ExperimentConfig& c) {
  const EllipticalModel model = build_model(c.model, c.p);
  const Kernel kernel = build_kernel(c.kernel, c.p);
  const SymMatrix truth = kernel_mean(c, model);
  const bool off = c.p >= 2;
  const std::size_t reps = reps_of(c);
  const std::size_t levels = c.alpha_grid.size();

  std::vector<std::vector<char>> cov_all(reps, std::vector<char>(levels, 0));
  std::vector<std::vector<char>> cov_off(reps, std::vector<char>(levels, 0));
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng rng = channel(c, kTruthChannel, r);
    const SplitRep s = simulate_split(model, c.n, rng);
    const SymMatrix diff = compute_u(s.main, kernel).u - truth;
    const DecoupledGEstimates g = estimate_g_decoupled(s.main, s.train, kernel);
    // One multiplier matrix for both restrictions.
    const Matrix e = multiplier_matrix(g.n, b_of(c), rng.next_u64());
    const BootstrapDraws all =
        draw_bootstrap_with(g, e, BootstrapScaling::Applications, Restriction::All);
    const double stat_all = sup_norm(diff);
    for (std::size_t k = 0; k < levels; ++k) {
      cov_all[r][k] = stat_all <= quantile(all, c.alpha_grid[k]).value;
    }
    if (off) {
      const BootstrapDraws od =
          draw_bootstrap_with(g, e, BootstrapScaling::Applications, Restriction::OffDiagonal);
      const double stat_off = off_sup_norm(diff);
      for (std::size_t k = 0; k < levels; ++k) {
        cov_off[r][k] = stat_off <= quantile(od, c.alpha_grid[k]).value;
      }
    }
  });

  ExperimentOutput out;
  out.table.header = {"alpha", "coverage_all"};
  if (off) out.table.header.push_back("coverage_off");
  double dev_all = 0.0, dev_off = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    double a = 0.0, o = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      a += cov_all[r][k];
      o += cov_off[r][k];
    }
    a /= static_cast<double>(reps);
    o /= static_cast<double>(reps);
    dev_all = std::max(dev_all, std::abs(a - c.alpha_grid[k]));
    std::vector<double> row{c.alpha_grid[k], a};
    if (off) {
      row.push_back(o);
      dev_off = std::max(dev_off, std::abs(o - c.alpha_grid[k]));
    }
    out.table.rows.push_back(std::move(row));
  }
  out.summary = {{"max_abs_deviation_all", dev_all}, {"replications", reps}};
  if (off) out.summary["max_abs_deviation_off"] = dev_off;
  return out;
}

ExperimentOutput run_threshold_eval(const ExperimentConfig& c) {
  require_covariance_kernel(c, "threshold_eval");
  const EllipticalModel model = build_model(c.model, c.p);
  const SymMatrix sigma = population_sigma(model);
  const double zeta = row_sparsity(sigma);
  const Kernel kernel = Kernel::covariance(static_cast<Index>(c.p));
  const std::size_t reps = reps_of(c);
  const double tau_delta =
      c.tau_delta_c * std::sqrt(std::log(static_cast<double>(c.p)) / static_cast<double>(c.n));

  std::vector<std::vector<double>> rows(reps);
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng rng = channel(c, kTruthChannel, r);
    const SplitRep s = simulate_split(model, c.n, rng);
    const SymMatrix s_hat = compute_u(s.main, kernel).u;
    const DecoupledGEstimates g = estimate_g_decoupled(s.main, s.train, kernel);
    const BootstrapDraws draws =
        draw_bootstrap(g, b_of(c), BootstrapScaling::Applications, Restriction::All, rng);
    const ThresholdedCov est = threshold_with_bootstrap(s_hat, draws, c.alpha, c.beta);
    const double a = c.beta * est.tau;
    const ErrorMetrics err = error_metrics(est.estimate, sigma);
    const double sup_err = sup_norm(s_hat - sigma);
    const bool event = sup_err <= a;
    const double spec_rhs = threshold_spectral_bound(zeta, a, c.beta);
    const double frob_rhs = threshold_frobenius_bound(zeta, a, c.beta);
    rows[r] = {static_cast<double>(r),
               est.tau,
               sup_err,
               event ? 1.0 : 0.0,
               err.spectral,
               err.frob_per_p,
               spec_rhs,
               err.spectral <= spec_rhs ? 1.0 : 0.0,
               frob_rhs,
               err.frob_per_p <= frob_rhs ? 1.0 : 0.0,
               tau_delta};
  });

  ExperimentOutput out;
  out.table.header = {"replication", "tau_star",     "sup_err",        "event",
                      "spectral_err", "frob_err",    "bound_rhs",      "bound_holds",
                      "frob_bound_rhs", "frob_holds", "tau_delta"};
  out.table.rows = std::move(rows);
  std::size_t events = 0, spec_viol = 0, frob_viol = 0;
  std::vector<double> taus;
  for (const auto& row : out.table.rows) {
    taus.push_back(row[1]);
    if (row[3] == 0.0) continue;
    ++events;
    if (row[7] == 0.0) ++spec_viol;
    if (row[9] == 0.0) ++frob_viol;
  }
  out.summary = {{"event_rate", static_cast<double>(events) / static_cast<double>(reps)},
                 {"spectral_violations", spec_viol},
                 {"frobenius_violations", frob_viol},
                 {"mean_tau_star", mean_of(taus)},
                 {"tau_delta", tau_delta},
                 {"zeta_p", zeta},
                 {"replications", reps}};
  return out;
}

ExperimentOutput run_test_size(const ExperimentConfig& c) {
  const bool do_cov = std::find(c.tests.begin(), c.tests.end(), "covariance") != c.tests.end();
  const bool do_kendall = std::find(c.tests.begin(), c.tests.end(), "kendall") != c.tests.end();
  const EllipticalModel cov_model = build_model(c.model, c.p);
  const EllipticalModel kendall_model = build_model(c.kendall_model, c.p);
  const SymMatrix sigma0 = population_sigma(cov_model);
  const SymMatrix t0 = population_kendall_mean(kendall_model.v) -
                       SymMatrix::constant(kendall_model.p(), 1.0);
  const std::size_t reps = reps_of(c);
  const std::size_t levels = c.alpha_grid.size();
  const auto total = 2 * static_cast<Index>(c.n);

  std::vector<std::vector<char>> rej_cov(reps, std::vector<char>(levels, 0));
  std::vector<std::vector<char>> rej_kendall(reps, std::vector<char>(levels, 0));
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng base = channel(c, kTruthChannel, r);
    if (do_cov) {
      Rng rng = base.substream(0);
      const TestResult t =
          test_covariance(sample(cov_model, total, rng), sigma0, c.alpha_grid[0], b_of(c), rng);
      for (std::size_t k = 0; k < levels; ++k) rej_cov[r][k] = t.at_level(c.alpha_grid[k]).reject;
    }
    if (do_kendall) {
      Rng rng = base.substream(1);
      const TestResult t =
          test_kendall(sample(kendall_model, total, rng), t0, c.alpha_grid[0], b_of(c), rng);
      for (std::size_t k = 0; k < levels; ++k) {
        rej_kendall[r][k] = t.at_level(c.alpha_grid[k]).reject;
      }
    }
  });

  ExperimentOutput out;
  out.table.header = {"alpha"};
  if (do_cov) out.table.header.push_back("empirical_size_cov");
  if (do_kendall) out.table.header.push_back("empirical_size_kendall");
  nlohmann::json sizes = nlohmann::json::array();
  for (std::size_t k = 0; k < levels; ++k) {
    std::vector<double> row{c.alpha_grid[k]};
    nlohmann::json entry = {{"alpha", c.alpha_grid[k]}};
    if (do_cov) {
      std::vector<char> col(reps);
      for (std::size_t r = 0; r < reps; ++r) col[r] = rej_cov[r][k];
      row.push_back(fraction(col));
      entry["size_cov"] = row.back();
    }
    if (do_kendall) {
      std::vector<char> col(reps);
      for (std::size_t r = 0; r < reps; ++r) col[r] = rej_kendall[r][k];
      row.push_back(fraction(col));
      entry["size_kendall"] = row.back();
    }
    sizes.push_back(entry);
    out.table.rows.push_back(std::move(row));
  }
  out.summary = {{"sizes", sizes}, {"replications", reps}};
  return out;
}

namespace {

SymMatrix snapped_inverse(const SymMatrix& s) {
  Matrix inv = s.matrix().ldlt().solve(Matrix::Identity(s.dim(), s.dim()));
  inv = (inv.array().abs() < 1e-12).select(0.0, inv);
  return SymMatrix(std::move(inv));
}

}  // namespace

ExperimentOutput run_clime_eval(const ExperimentConfig& c) {
  require_covariance_kernel(c, "clime_eval");
  const EllipticalModel model = build_model(c.model, c.p);
  const SymMatrix sigma = population_sigma(model);
  const SymMatrix omega = snapped_inverse(sigma);
  const double m_bound = matrix_l1_norm(omega);
  const double zeta = row_sparsity(omega);
  const Kernel kernel = Kernel::covariance(static_cast<Index>(c.p));
  const std::size_t reps = reps_of(c);

  std::vector<std::vector<double>> rows(reps);
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng rng = channel(c, kTruthChannel, r);
    const SplitRep s = simulate_split(model, c.n, rng);
    const SymMatrix s_hat = compute_u(s.main, kernel).u;
    const DecoupledGEstimates g = estimate_g_decoupled(s.main, s.train, kernel);
    const BootstrapDraws draws =
        draw_bootstrap(g, b_of(c), BootstrapScaling::Applications, Restriction::All, rng);
    const QuantileEstimate q = quantile(draws, 1.0 - c.alpha);
    const double lambda = select_lambda_star(q, m_bound);
    const ClimeResult fit = solve_clime(s_hat, lambda);
    const ErrorMetrics err = error_metrics(fit.omega, omega);
    const bool event = sup_norm(s_hat - sigma) <= q.value;
    const ClimeBounds bound = clime_rate_bounds(zeta, m_bound, q.value);
    const bool holds = err.sup <= bound.sup && err.spectral <= bound.spectral &&
                       err.frob_per_p <= bound.frob_per_p;
    rows[r] = {static_cast<double>(r), lambda,        event ? 1.0 : 0.0,
               fit.feasible() ? 1.0 : 0.0, err.sup,   err.spectral,
               err.frob_per_p,           bound.sup,   bound.spectral,
               bound.frob_per_p,         holds ? 1.0 : 0.0};
  });

  ExperimentOutput out;
  out.table.header = {"replication", "lambda_star", "event",          "feasible",
                      "sup_err",     "spectral_err", "frob_err",      "sup_bound",
                      "spectral_bound", "frob_bound", "bounds_hold"};
  out.table.rows = std::move(rows);
  std::size_t events = 0, violations = 0;
  std::vector<double> lambdas, sup_errs;
  for (const auto& row : out.table.rows) {
    lambdas.push_back(row[1]);
    sup_errs.push_back(row[4]);
    if (row[2] == 0.0) continue;
    ++events;
    if (row[10] == 0.0) ++violations;
  }
  out.summary = {{"event_rate", static_cast<double>(events) / static_cast<double>(reps)},
                 {"bound_violations", violations},
                 {"mean_lambda_star", mean_of(lambdas)},
                 {"mean_sup_err", mean_of(sup_errs)},
                 {"omega_l1", m_bound},
                 {"zeta_p", zeta},
                 {"replications", reps}};
  return out;
}

ExperimentOutput run_linfun_eval(const ExperimentConfig& c) {
  require_covariance_kernel(c, "linfun_eval");
  const EllipticalModel model = build_model(c.model, c.p);
  const SymMatrix sigma = population_sigma(model);
  const auto p = static_cast<Index>(c.p);
  Vector theta = Vector::Zero(p);
  theta.head(static_cast<Index>(c.theta_support)).setOnes();
  const Vector b = sigma.matrix() * theta;
  const double m_bound = theta.lpNorm<1>();
  const double inv_l1 = matrix_l1_norm(snapped_inverse(sigma));
  const auto zeta = static_cast<double>(support_size(theta));
  const Kernel kernel = Kernel::covariance(p);
  const std::size_t reps = reps_of(c);
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> rows(reps);
  parallel_for(reps, workers_of(c), [&](std::size_t r) {
    Rng rng = channel(c, kTruthChannel, r);
    const SplitRep s = simulate_split(model, c.n, rng);
    const SymMatrix s_hat = compute_u(s.main, kernel).u;
    const DecoupledGEstimates g = estimate_g_decoupled(s.main, s.train, kernel);
    const BootstrapDraws draws =
        draw_bootstrap(g, b_of(c), BootstrapScaling::Applications, Restriction::All, rng);
    const QuantileEstimate q = quantile(draws, 1.0 - c.alpha);
    const double lambda = select_lambda_star(q, m_bound);
    const LinFunSolution fit = solve_dantzig_linfun(s_hat, b, lambda);
    const Vector diff = fit.theta - theta;
    const double e1 = diff.lpNorm<1>(), e2 = diff.norm(), einf = diff.lpNorm<Eigen::Infinity>();
    const double b1 = linfun_rate_bound(1.0, zeta, m_bound, inv_l1, q.value);
    const double b2 = linfun_rate_bound(2.0, zeta, m_bound, inv_l1, q.value);
    const double binf = linfun_rate_bound(inf, zeta, m_bound, inv_l1, q.value);
    const bool event = sup_norm(s_hat - sigma) <= q.value;
    const bool holds = e1 <= b1 && e2 <= b2 && einf <= binf;
    rows[r] = {static_cast<double>(r),
               lambda,
               event ? 1.0 : 0.0,
               fit.feasible ? 1.0 : 0.0,
               e1,
               e2,
               einf,
               b1,
               b2,
               binf,
               holds ? 1.0 : 0.0,
               smallness_measure(theta, 5.0 * lambda * inv_l1)};
  });

  ExperimentOutput out;
  out.table.header = {"replication", "lambda_star", "event",     "feasible",
                      "err_l1",      "err_l2",      "err_linf",  "bound_l1",
                      "bound_l2",    "bound_linf",  "bounds_hold", "smallness"};
  out.table.rows = std::move(rows);
  std::size_t events = 0, violations = 0;
  std::vector<double> lambdas, errs;
  for (const auto& row : out.table.rows) {
    lambdas.push_back(row[1]);
    errs.push_back(row[6]);
    if (row[2] == 0.0) continue;
    ++events;
    if (row[10] == 0.0) ++violations;
  }
  out.summary = {{"event_rate", static_cast<double>(events) / static_cast<double>(reps)},
                 {"bound_violations", violations},
                 {"mean_lambda_star", mean_of(lambdas)},
                 {"mean_err_linf", mean_of(errs)},
                 {"theta_l1", m_bound},
                 {"sigma_inv_l1", inv_l1},
                 {"replications", reps}};
  return out;
}

ExperimentOutput run_maximal_ineq_scaling(const ExperimentConfig& c) {
  if (c.kernel == "kendall") {
    throw ConfigError("maximal_ineq_scaling needs a known projection; use covariance or constant");
  }
  const EllipticalModel model = build_model(c.model, c.p);
  const Kernel kernel = build_kernel(c.kernel, c.p);
  const SymMatrix mean_h = kernel_mean(c, model);
  const bool covariance = c.kernel == "covariance";
  const std::size_t reps = reps_of(c);
  const auto plugin_reps = std::min(reps, static_cast<std::size_t>(c.plugin_reps));
  const Index p = model.p();

  ExperimentOutput out;
  out.table.header = {"n", "mean_sup_V", "mean_sup_W", "mean_sup_nondegenerate",
                      "mean_sup_V_plugin"};
  std::vector<double> ns, v_means, w_means, u_means;
  for (std::size_t gi = 0; gi < c.n_grid.size(); ++gi) {
    const auto n = static_cast<Index>(c.n_grid[gi]);
    std::vector<double> sup_v(reps), sup_u(reps), sup_plugin(plugin_reps);
    parallel_for(reps, workers_of(c), [&](std::size_t r) {
      Rng rng = channel(c, kTruthChannel, r).substream(gi);
      const DataMatrix data = sample(model, n, rng);
      SymMatrix v = covariance
                        ? population_canonical_covariance(data)
                        : population_canonical_part(
                              data, kernel, [p](const VectorView&) { return SymMatrix(p); },
                              mean_h);
      sup_v[r] = sup_norm(v);
      sup_u[r] = sup_norm(compute_u(data, kernel).u - mean_h);
      if (r < plugin_reps && n >= 3) {
        const EmpiricalHoeffding eh = empirical_hoeffding(data, kernel);
        Matrix acc = Matrix::Zero(p, p);
        for (Index i = 0; i < n; ++i) {
          for (Index j = i + 1; j < n; ++j) acc += eh.f_hat(i, j).matrix();
        }
        acc /= 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
        sup_plugin[r] = acc.cwiseAbs().maxCoeff();
      }
    });
    const double mv = mean_of(sup_v);
    const double mw = std::sqrt(static_cast<double>(n)) / 2.0 * mv;
    const double mu = mean_of(sup_u);
    ns.push_back(static_cast<double>(n));
    v_means.push_back(mv);
    w_means.push_back(mw);
    u_means.push_back(mu);
    out.table.rows.push_back({static_cast<double>(n), mv, mw, mu,
                              plugin_reps ? mean_of(sup_plugin)
                                          : std::numeric_limits<double>::quiet_NaN()});
  }
  const double slope_v = loglog_slope(ns, v_means);
  const double slope_w = loglog_slope(ns, w_means);
  const double slope_u = loglog_slope(ns, u_means);
  out.table.header.insert(out.table.header.end(), {"fitted_slope_V", "fitted_slope_W"});
  for (auto& row : out.table.rows) {
    row.push_back(slope_v);
    row.push_back(slope_w);
  }
  auto finite_or_null = [](double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  out.summary = {{"slope_V", finite_or_null(slope_v)},
                 {"slope_W", finite_or_null(slope_w)},
                 {"slope_nondegenerate", finite_or_null(slope_u)},
                 {"replications", reps}};
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& c) {
  validate(c);
  switch (c.experiment) {
    case Experiment::PpPlot:
      return run_pp_plot(c);
    case Experiment::NaiveVsHajek:
      return run_naive_vs_hajek(c);
    case Experiment::Coverage:
      return run_coverage(c);
    case Experiment::ThresholdEval:
      return run_threshold_eval(c);
    case Experiment::TestSize:
      return run_test_size(c);
    case Experiment::ClimeEval:
      return run_clime_eval(c);
    case Experiment::LinfunEval:
      return run_linfun_eval(c);
    case Experiment::MaximalIneqScaling:
      return run_maximal_ineq_scaling(c);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace ustatboot::harness
