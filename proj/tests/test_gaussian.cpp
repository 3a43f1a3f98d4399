#include "oracles.hpp"

#include "ustatboot/distributions.hpp"
#include "ustatboot/error.hpp"
#include "ustatboot/gaussian_approx.hpp"

#include <doctest.h>

using namespace ustatboot;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

SymMatrix sym2(double a, double b, double d) {
  Matrix m(2, 2);
  m << a, b, b, d;
  return SymMatrix(m);
}

}  // namespace

TEST_SUITE("gaussian-approx") {
  TEST_CASE("empirical Gamma_g") {
    const std::vector<SymMatrix> same(5, sym2(1.0, 2.0, 3.0));
    const GammaG z = estimate_gamma_g(same);
    CHECK(z.p_prime() == 3);
    CHECK(max_abs(z.cov.matrix()) == 0.0);

    std::vector<SymMatrix> one;
    const std::vector<double> xs = {1.0, 4.0, -2.0, 0.5};
    for (double x : xs) one.push_back(sym2(0.0, x, 0.0));
    const GammaG g = estimate_gamma_g(one);
    const double mu = oracle::mean(xs);
    double s2 = 0.0;
    for (double x : xs) s2 += (x - mu) * (x - mu);
    s2 /= 3.0;
    const Index c = VechIndex(2).index(1, 0);
    CHECK(g.cov(c, c) == doctest::Approx(s2));
    CHECK(g.cov.matrix().sum() == doctest::Approx(s2));
    CHECK_THROWS_AS(estimate_gamma_g({sym2(1, 1, 1)}), SampleSizeError);
    CHECK_THROWS_AS(estimate_gamma_g(same, 1), DomainError);
  }

  TEST_CASE("analytic Gamma_g") {
    const GammaG g = analytic_gamma_g_elliptical(SymMatrix::identity(3), 0.0);
    const VechIndex vi(3);
    for (Index a = 0; a < vi.size(); ++a) {
      CHECK(g.cov(a, a) == doctest::Approx(vi.is_diagonal(a) ? 0.5 : 0.25));
    }

    Matrix s(3, 3);
    s << 2.0, 0.6, -0.3, 0.6, 1.5, 0.2, -0.3, 0.2, 1.0;
    const SymMatrix sigma(s);
    const GammaG t8 = analytic_gamma_g_elliptical(sigma, 0.5);
    for (Index a = 0; a < vi.size(); ++a) {
      const auto [j, k] = vi.pair(a);
      CHECK(t8.cov(a, a) ==
            doctest::Approx((3.0 * s(j, j) * s(k, k) + 4.0 * s(j, k) * s(j, k)) / 8.0));
      for (Index b = 0; b < vi.size(); ++b) {
        const auto [m, l] = vi.pair(b);
        const double expect = (0.5 * (s(j, k) * s(m, l) + s(j, m) * s(k, l) + s(j, l) * s(k, m)) +
                               s(j, m) * s(k, l) + s(j, l) * s(k, m)) / 4.0;
        CHECK(t8.cov(a, b) == doctest::Approx(expect));
        CHECK(t8.cov(a, b) == t8.cov(b, a));
      }
    }
    CHECK_THROWS_AS(analytic_gamma_g_elliptical(SymMatrix::identity(4), 0.0, 3), DomainError);
  }

  TEST_CASE("Gaussian maxima") {
    GammaG zero{2, SymMatrix(3)};
    Rng r0(1);
    for (double v : sample_z_max(zero, 10, Sidedness::AbsMax, Restriction::All, r0)) {
      CHECK(v == 0.0);
    }

    GammaG unit{1, SymMatrix::identity(1)};
    Rng r1(2), r2(2);
    const auto d = sample_z_max(unit, 20000, Sidedness::SignedMax, Restriction::All, r1);
    CHECK(std::is_sorted(d.begin(), d.end()));
    CHECK(oracle::ks_statistic(d, oracle::normal_cdf) < 1.63 / std::sqrt(20000.0));
    CHECK(sample_z_max(unit, 20000, Sidedness::SignedMax, Restriction::All, r2) == d);

    const GammaG g = analytic_gamma_g_elliptical(build_v(DependenceSpec::d3(4)), 0.3);
    GammaG g4 = g;
    g4.cov *= 4.0;
    for (auto side : {Sidedness::SignedMax, Sidedness::AbsMax}) {
      Rng a(9), b(9);
      const auto x = sample_z_max(g, 200, side, Restriction::All, a);
      const auto y = sample_z_max(g4, 200, side, Restriction::All, b);
      for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(y[i] == doctest::Approx(2.0 * x[i]).epsilon(1e-12));
      }
    }
    Rng a(10), b(10);
    const auto all = sample_z_max(g, 200, Sidedness::AbsMax, Restriction::All, a);
    const auto off = sample_z_max(g, 200, Sidedness::AbsMax, Restriction::OffDiagonal, b);
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(off[i] <= all[i]);
    CHECK_THROWS_AS(sample_z_max(unit, 5, Sidedness::AbsMax, Restriction::OffDiagonal, a),
                    DomainError);
  }

  TEST_CASE("factor of a singular Gamma_g") {
    const std::vector<SymMatrix> gs = {sym2(1, 0, 1), sym2(2, 0, 2), sym2(-1, 0, -1)};
    const GammaG g = estimate_gamma_g(gs);
    const Matrix l = gamma_factor(g);
    CHECK((l * l.transpose() - g.cov.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = bad(1, 0) = 3.0;
    CHECK_THROWS_AS(gamma_factor(GammaG{1, SymMatrix(bad)}), NotPositiveDefinite);
  }

  TEST_CASE("Kolmogorov distance") {
    CHECK(kolmogorov_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(kolmogorov_distance({0}, {1}) == 1.0);
    CHECK(kolmogorov_distance({1, 2}, {1, 3}) == 0.5);
    CHECK_THROWS_AS(kolmogorov_distance({}, {1}), DomainError);
    Rng r(3);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> a(7), b(5), c(9);
      for (auto* v : {&a, &b, &c}) {
        for (auto& x : *v) x = std::round(4.0 * r.normal()) / 4.0;
        std::sort(v->begin(), v->end());
      }
      const double ab = kolmogorov_distance(a, b);
      CHECK(ab == kolmogorov_distance(b, a));
      CHECK(ab <= kolmogorov_distance(a, c) + kolmogorov_distance(c, b) + 1e-15);
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
    }
  }

  TEST_CASE("naive Gaussian-data draws") {
    Rng r(4);
    const auto zero = naive_gaussian_ustat_draws(SymMatrix(3), 10, Kernel::covariance(3), 5,
                                                 Sidedness::AbsMax, r);
    for (double v : zero) CHECK(v == 0.0);

    const SymMatrix sigma = build_v(DependenceSpec::ar1(3, 0.4));
    Rng a(6), b(6);
    const auto x = naive_gaussian_ustat_draws(sigma, 30, Kernel::covariance(3), 40,
                                              Sidedness::SignedMax, a);
    const auto y = naive_gaussian_ustat_draws(sigma, 30, Kernel::covariance(3), 40,
                                              Sidedness::SignedMax, b, 3);
    CHECK(x == y);
    CHECK(std::is_sorted(x.begin(), x.end()));

    // Gaussian truth: naive draws and independently simulated T statistics
    // share one law.
    const std::size_t reps = 600;
    Rng c(7), d(8);
    const auto naive = naive_gaussian_ustat_draws(sigma, 40, Kernel::kendall_tau(3), reps,
                                                  Sidedness::SignedMax, c);
    std::vector<double> truth;
    const EllipticalModel gauss = model_gaussian(sigma);
    const SymMatrix mean = population_kendall_mean(sigma);
    for (std::size_t i = 0; i < reps; ++i) {
      const UStatResult u = compute_u(sample(gauss, 40, d), Kernel::kendall_tau(3));
      truth.push_back(sup_stat(u, mean, false, Sidedness::SignedMax));
    }
    std::sort(truth.begin(), truth.end());
    CHECK(kolmogorov_distance(naive, truth) < 1.95 * std::sqrt(2.0 / reps));
    const Kernel custom = Kernel::constant(3, 1.0);
    CHECK_THROWS_AS(naive_gaussian_ustat_draws(sigma, 10, custom, 2, Sidedness::AbsMax, c),
                    DomainError);
  }
}

TEST_SUITE("distributions") {
  TEST_CASE("dependence structures") {
    CHECK(build_v(DependenceSpec::d1(2)).matrix() == (Matrix(2, 2) << 1.0, 0.9, 0.9, 1.0).finished());
    const Matrix d2 = build_v(DependenceSpec::d2(3)).matrix();
    Matrix e(3, 3);
    e << 1, .7, .49, .7, 1, .7, .49, .7, 1;
    CHECK(max_abs(d2 - e) < 1e-15);
    CHECK(build_v(DependenceSpec::ar1(5, 0.0)) == SymMatrix::identity(5));
    CHECK(build_v(DependenceSpec::d3(3))(0, 2) == doctest::Approx(0.09));
    CHECK(build_v(DependenceSpec::equicorrelation(3, 0.25))(1, 2) == 0.25);
    CHECK_THROWS_AS(build_v(DependenceSpec::ar1(3, 1.0)), DomainError);
    const SymMatrix band = band_truncate(build_v(DependenceSpec::d2(5)), 1);
    CHECK(band(0, 2) == 0.0);
    CHECK(band(0, 1) == doctest::Approx(0.7));
  }

  TEST_CASE("population moments") {
    const EllipticalModel m1 = model_m1(SymMatrix::identity(3));
    CHECK(max_abs(population_sigma(m1).matrix() - 1.25 * Matrix::Identity(3, 3)) < 1e-15);
    CHECK(kurtosis_kappa(m1) == 0.16);
    const EllipticalModel m2 = model_m2(SymMatrix::identity(3));
    CHECK(max_abs(population_sigma(m2).matrix() - 1.25 * Matrix::Identity(3, 3)) < 1e-15);
    CHECK(kurtosis_kappa(m2) == 1.0 / 3.0);
    EllipticalModel unit = model_m1(SymMatrix::identity(2));
    unit.nu = 1.0;
    CHECK(population_sigma(unit) == SymMatrix::identity(2));
    CHECK(kurtosis_kappa(model_gaussian(SymMatrix::identity(2))) == 0.0);
    CHECK_THROWS_AS(model_m2(SymMatrix::identity(2), 4.0).validate(), DomainError);
    CHECK_THROWS_AS(kurtosis_kappa(EllipticalModel{Family::EllipticT, 0.0, 3.0,
                                                   SymMatrix::identity(2)}),
                    DomainError);
    EllipticalModel bad_v = model_gaussian(sym2(1.0, 2.0, 1.0));
    CHECK_THROWS_AS(bad_v.validate(), NotPositiveDefinite);
  }

  TEST_CASE("sampling is deterministic") {
    const EllipticalModel m = model_m1(build_v(DependenceSpec::d1(4)));
    Rng a(12), b(12);
    CHECK(sample(m, 30, a).rows() == sample(m, 30, b).rows());
    CHECK_THROWS_AS(sample(m, 0, a), SampleSizeError);
  }

  TEST_CASE("sample means and covariances") {
    const Index n = 40000;
    for (const EllipticalModel& m :
         {model_gaussian(build_v(DependenceSpec::d2(3))), model_m1(build_v(DependenceSpec::d3(3))),
          model_m2(build_v(DependenceSpec::d1(3)))}) {
      Rng r(321);
      const DataMatrix d = sample(m, n, r);
      const SymMatrix sigma = population_sigma(m);
      for (Index j = 0; j < 3; ++j) {
        std::vector<double> col(d.rows().col(j).data(), d.rows().col(j).data() + n);
        CHECK(std::abs(oracle::mean(col)) < 4.0 * oracle::std_error(col));
        for (Index k = 0; k <= j; ++k) {
          std::vector<double> prod(static_cast<std::size_t>(n));
          for (Index i = 0; i < n; ++i) prod[static_cast<std::size_t>(i)] = d.rows()(i, j) * d.rows()(i, k);
          CHECK(std::abs(oracle::mean(prod) - sigma(j, k)) < 5.0 * oracle::std_error(prod));
        }
      }
    }
  }

  TEST_CASE("kendall mean under an elliptical law") {
    const SymMatrix v = build_v(DependenceSpec::ar1(3, 0.5));
    const SymMatrix mean = population_kendall_mean(v);
    CHECK(mean(0, 0) == 2.0);
    CHECK(mean(0, 1) == doctest::Approx(1.0 + 1.0 / 3.0));
    Rng r(55);
    const DataMatrix d = sample(model_m1(v), 6000, r);
    const SymMatrix u = compute_u(d, Kernel::kendall_tau(3)).u;
    CHECK(std::abs(u(0, 1) - mean(0, 1)) < 0.03);
  }
}
