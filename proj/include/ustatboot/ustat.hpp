#pragma once

// Order-two U-statistics, their sup-norm statistics and the empirical
// Hoeffding decomposition.

#include "ustatboot/kernels.hpp"
#include "ustatboot/matrix.hpp"

#include <functional>
#include <vector>

namespace ustatboot {

struct UStatResult {
  SymMatrix u;
  Index n;
  Kernel kernel;
};

/// U = C(n,2)^{-1} sum_{i<j} h(X_i, X_j). The covariance and Kendall kernels
/// use closed-form or blocked fast paths; custom kernels use the pair loop.
UStatResult compute_u(const DataMatrix& data, const Kernel& kernel);

/// Straight double loop over i < j through Kernel::eval. Reference path.
SymMatrix compute_u_pairwise(const DataMatrix& data, const Kernel& kernel);

/// Kendall's tau matrix: U-statistic of the Kendall kernel minus one.
SymMatrix kendall_tau_matrix(const DataMatrix& data);

enum class Sidedness { SignedMax, AbsMax };

/// Largest entry (SignedMax) or largest |entry| (AbsMax).
double max_entry(const SymMatrix& m, Sidedness side);

/// off_diag_only == false: sqrt(n)/2 * max of (U - target) per `side`.
/// off_diag_only == true: ||U - target||_off, unscaled.
double sup_stat(const UStatResult& u, const SymMatrix& target, bool off_diag_only,
                Sidedness side = Sidedness::AbsMax);

/// Plug-in Hoeffding pieces computed from a single sample:
///   h1(x_i) = (n-1)^{-1} sum_{j != i} h(x_i, x_j),  h_bar = U,
///   g_i = h1(x_i) - h_bar,  f(x_i, x_j) = h(x_i, x_j) - h1(x_i) - h1(x_j) + h_bar,
/// so that h = f + g_i + g_j + h_bar for every pair.
class EmpiricalHoeffding {
 public:
  EmpiricalHoeffding(DataMatrix data, Kernel kernel);

  Index n() const noexcept { return data_.n(); }
  const SymMatrix& h_bar() const noexcept { return h_bar_; }
  const std::vector<SymMatrix>& g_hat() const noexcept { return g_; }
  const SymMatrix& row_mean(Index i) const { return h1_.at(static_cast<std::size_t>(i)); }
  /// Plug-in canonical part for the pair (i, j), i != j.
  SymMatrix f_hat(Index i, Index j) const;

 private:
  DataMatrix data_;
  Kernel kernel_;
  SymMatrix h_bar_;
  std::vector<SymMatrix> h1_;
  std::vector<SymMatrix> g_;
};

/// Requires n >= 3.
EmpiricalHoeffding empirical_hoeffding(const DataMatrix& data, const Kernel& kernel);

/// Exact Hajek projection of the covariance kernel for mean-zero F with
/// covariance sigma: (x x^T - sigma) / 2.
SymMatrix population_g_covariance(const VectorView& x, const SymMatrix& sigma);

/// Population projection g(x), used with a known data-generating law.
using ProjectionFunction = std::function<SymMatrix(const VectorView&)>;

/// Canonical U-statistic V = C(n,2)^{-1} sum_{i<j} f(X_i, X_j) with the
/// population remainder f = h - g(x_i) - g(x_j) - E h.
SymMatrix population_canonical_part(const DataMatrix& data, const Kernel& kernel,
                                    const ProjectionFunction& g, const SymMatrix& mean_h);

/// Closed form of population_canonical_part for the covariance kernel under
/// a mean-zero law: f(x1, x2) = -(x1 x2^T + x2 x1^T) / 2.
SymMatrix population_canonical_covariance(const DataMatrix& data);

}  // namespace ustatboot
