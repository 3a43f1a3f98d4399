#include "ustatboot/inference.hpp"

#include "ustatboot/error.hpp"
#include "ustatboot/ustat.hpp"

#include <string>

namespace ustatboot {

bool reject_decision(double statistic, double critical_value) noexcept {
  return statistic > 0.0 && statistic >= critical_value;
}

TestResult TestResult::at_level(double level) const {
  TestResult out = *this;
  out.alpha = level;
  out.critical_value = quantile(draws, 1.0 - level).value;
  out.reject = reject_decision(statistic, out.critical_value);
  return out;
}

TestResult test_ustat_mean(const DataMatrix& data, const Kernel& kernel, const SymMatrix& u0,
                           double alpha, std::size_t b, Rng& rng, Restriction restriction,
                           const TestOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("test: alpha must lie in (0, 1)");
  if (u0.dim() != data.p()) throw DimensionError("test: null matrix dimension mismatch");
  auto [main, train] = split_sample(data, rng);
  const UStatResult u = compute_u(main, kernel);
  const SymMatrix diff = u.u - u0;
  TestResult out;
  out.alpha = alpha;
  out.b = b;
  out.statistic = restriction == Restriction::All ? sup_norm(diff) : off_sup_norm(diff);
  const DecoupledGEstimates g = estimate_g_decoupled(main, train, kernel);
  out.draws = draw_bootstrap(g, b, BootstrapScaling::Applications, restriction, rng,
                             {options.workers});
  out.critical_value = quantile(out.draws, 1.0 - alpha).value;
  out.reject = reject_decision(out.statistic, out.critical_value);
  return out;
}

TestResult test_covariance(const DataMatrix& data, const SymMatrix& sigma0, double alpha,
                           std::size_t b, Rng& rng, const TestOptions& options) {
  return test_ustat_mean(data, Kernel::covariance(data.p()), sigma0, alpha, b, rng,
                         Restriction::OffDiagonal, options);
}

TestResult test_kendall(const DataMatrix& data, const SymMatrix& t0, double alpha, std::size_t b,
                        Rng& rng, const TestOptions& options) {
  // The Kendall kernel averages to tau + 1.
  const SymMatrix u0 = t0 + SymMatrix::constant(t0.dim(), 1.0);
  return test_ustat_mean(data, Kernel::kendall_tau(data.p()), u0, alpha, b, rng,
                         Restriction::OffDiagonal, options);
}

}  // namespace ustatboot
