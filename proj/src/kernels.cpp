#include "ustatboot/kernels.hpp"

#include "ustatboot/error.hpp"

#include <cassert>
#include <string>
#include <utility>

namespace ustatboot {

namespace {

void check_lengths(const VectorView& x1, const VectorView& x2, Index p) {
  if (x1.size() != x2.size() || (p > 0 && x1.size() != p)) {
    throw DimensionError("kernel: argument lengths " + std::to_string(x1.size()) + " and " +
                         std::to_string(x2.size()) + " do not match p = " + std::to_string(p));
  }
}

}  // namespace

SymMatrix eval_covariance_kernel(const VectorView& x1, const VectorView& x2) {
  check_lengths(x1, x2, x1.size());
  if (x1.size() < 1) throw DimensionError("kernel: empty argument");
  const Vector d = x1 - x2;
  return trusted_symmetric(0.5 * d * d.transpose());
}

SymMatrix eval_kendall_kernel(const VectorView& x1, const VectorView& x2) {
  check_lengths(x1, x2, x1.size());
  if (x1.size() < 1) throw DimensionError("kernel: empty argument");
  const Index p = x1.size();
  Matrix h(p, p);
  for (Index k = 0; k < p; ++k) {
    const double dk = x1(k) - x2(k);
    for (Index m = k; m < p; ++m) {
      const double v = ((x1(m) - x2(m)) * dk > 0.0) ? 2.0 : 0.0;
      h(m, k) = v;
      h(k, m) = v;
    }
  }
  return trusted_symmetric(std::move(h));
}

Kernel::Kernel(KernelKind kind, Index p, KernelFunction fn)
    : kind_(kind), p_(p), fn_(std::move(fn)) {
  if (p < 1) throw DimensionError("Kernel: dimension must be >= 1");
}

Kernel Kernel::covariance(Index p) { return Kernel(KernelKind::Covariance, p, {}); }

Kernel Kernel::kendall_tau(Index p) { return Kernel(KernelKind::KendallTau, p, {}); }

Kernel Kernel::custom(Index p, KernelFunction fn) {
  if (!fn) throw DomainError("Kernel::custom: empty evaluator");
  return Kernel(KernelKind::Custom, p, std::move(fn));
}

Kernel Kernel::constant(Index p, double c) {
  return custom(p, [p, c](const VectorView&, const VectorView&) {
    return Matrix::Constant(p, p, c);
  });
}

SymMatrix Kernel::eval(const VectorView& x1, const VectorView& x2) const {
  check_lengths(x1, x2, p_);
  switch (kind_) {
    case KernelKind::Covariance:
      return eval_covariance_kernel(x1, x2);
    case KernelKind::KendallTau:
      return eval_kendall_kernel(x1, x2);
    case KernelKind::Custom:
      break;
  }
  Matrix h = fn_(x1, x2);
  if (h.rows() != p_ || h.cols() != p_) {
    throw DimensionError("Kernel: custom evaluator returned a " + std::to_string(h.rows()) +
                         "x" + std::to_string(h.cols()) + " matrix, expected p = " +
                         std::to_string(p_));
  }
  assert(((fn_(x2, x1) - h).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + h.cwiseAbs().maxCoeff())) &&
         "custom kernel is not symmetric in its arguments");
  return SymMatrix(std::move(h));
}

}  // namespace ustatboot
