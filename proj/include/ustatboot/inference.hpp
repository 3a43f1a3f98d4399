#pragma once

// Simultaneous sup-norm tests calibrated by the wild bootstrap. Each test
// splits the sample, computes the statistic on the main half and calibrates
// it with decoupled estimates from the training half.

#include "ustatboot/bootstrap.hpp"
#include "ustatboot/kernels.hpp"
#include "ustatboot/matrix.hpp"
#include "ustatboot/random.hpp"

namespace ustatboot {

struct TestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double alpha = 0.0;
  bool reject = false;
  std::size_t b = 0;
  BootstrapDraws draws;

  /// Same statistic and draws, re-decided at another level.
  TestResult at_level(double alpha) const;
};

/// statistic >= critical value, except that a zero statistic never rejects.
bool reject_decision(double statistic, double critical_value) noexcept;

struct TestOptions {
  std::size_t workers = 1;
};

/// H0: Sigma = sigma0 off the diagonal. Statistic ||S - sigma0||_off.
TestResult test_covariance(const DataMatrix& data, const SymMatrix& sigma0, double alpha,
                           std::size_t b, Rng& rng, const TestOptions& options = {});

/// H0: Kendall's tau matrix equals t0 off the diagonal.
TestResult test_kendall(const DataMatrix& data, const SymMatrix& t0, double alpha, std::size_t b,
                        Rng& rng, const TestOptions& options = {});

/// H0: E h = u0. Statistic is ||U - u0|| (or ||.||_off), unscaled.
TestResult test_ustat_mean(const DataMatrix& data, const Kernel& kernel, const SymMatrix& u0,
                           double alpha, std::size_t b, Rng& rng, Restriction restriction,
                           const TestOptions& options = {});

}  // namespace ustatboot
