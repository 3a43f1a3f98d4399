#pragma once

// Symmetric matrix-valued kernels of order two.

#include "ustatboot/matrix.hpp"

#include <functional>

namespace ustatboot {

using VectorView = Eigen::Ref<const Vector>;

/// User-supplied kernel evaluator. Must be reentrant and symmetric in its
/// two arguments; must return a p x p matrix.
using KernelFunction = std::function<Matrix(const VectorView&, const VectorView&)>;

enum class KernelKind { Covariance, KendallTau, Custom };

/// h(x1, x2) for the covariance kernel 1/2 (x1 - x2)(x1 - x2)^T.
SymMatrix eval_covariance_kernel(const VectorView& x1, const VectorView& x2);

/// h_mk(x1, x2) = 2 * 1{(x1m - x2m)(x1k - x2k) > 0}. Tied coordinates give 0.
SymMatrix eval_kendall_kernel(const VectorView& x1, const VectorView& x2);

class Kernel {
 public:
  static Kernel covariance(Index p);
  static Kernel kendall_tau(Index p);
  static Kernel custom(Index p, KernelFunction fn);
  /// Constant kernel h == c; handy for degenerate checks.
  static Kernel constant(Index p, double c);

  KernelKind kind() const noexcept { return kind_; }
  Index p() const noexcept { return p_; }

  SymMatrix eval(const VectorView& x1, const VectorView& x2) const;

 private:
  Kernel(KernelKind kind, Index p, KernelFunction fn);

  KernelKind kind_;
  Index p_;
  KernelFunction fn_;
};

}  // namespace ustatboot
