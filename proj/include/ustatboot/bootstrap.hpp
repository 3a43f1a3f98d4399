#pragma once

// Gaussian wild bootstrap with a decoupled (half-sample) estimate of the
// Hajek projection.

#include "ustatboot/kernels.hpp"
#include "ustatboot/matrix.hpp"
#include "ustatboot/random.hpp"

#include <utility>
#include <vector>

namespace ustatboot {

/// Shuffles the rows and returns two disjoint halves of floor(N/2) rows.
/// An odd leftover row is dropped. Requires N >= 4.
std::pair<DataMatrix, DataMatrix> split_sample(const DataMatrix& data, Rng& rng);

struct DecoupledGEstimates {
  Index n = 0;
  Index p = 0;
  std::vector<SymMatrix> g_hat;
  SymMatrix train_u;
};

/// g_i = (1/n) sum_j h(X_i, X'_j) - U(X'), one per main row.
DecoupledGEstimates estimate_g_decoupled(const DataMatrix& main, const DataMatrix& train,
                                         const Kernel& kernel);

/// Raw: signed max of n^{-1/2} sum_i g_i e_i.
/// Applications: max of 2/n |sum_i g_i e_i|.
enum class BootstrapScaling { Raw, Applications };
enum class Restriction { All, OffDiagonal };

struct BootstrapDraws {
  std::vector<double> values;  // ascending
  BootstrapScaling scaling = BootstrapScaling::Applications;
  Restriction restriction = Restriction::All;
};

struct BootstrapOptions {
  std::size_t workers = 1;
};

/// Draw d uses multipliers from the stream keyed by (master, d), where the
/// master seed is taken from `rng`. Results do not depend on `workers`.
BootstrapDraws draw_bootstrap(const DecoupledGEstimates& g, std::size_t b,
                              BootstrapScaling scaling, Restriction restriction, Rng& rng,
                              const BootstrapOptions& options = {});

/// Same draws computed from an explicit n x b multiplier matrix; column d
/// holds e_1..e_n for draw d.
BootstrapDraws draw_bootstrap_with(const DecoupledGEstimates& g, const Matrix& multipliers,
                                   BootstrapScaling scaling, Restriction restriction);

/// n x b matrix of standard normals, column d from substream d of `master`.
Matrix multiplier_matrix(Index n, std::size_t b, std::uint64_t master,
                         std::size_t workers = 1);

struct QuantileEstimate {
  double alpha = 0.0;
  double value = 0.0;
  std::size_t b = 0;
};

/// ceil(alpha * B)-th order statistic (1-based) of the sorted draws.
QuantileEstimate quantile(const BootstrapDraws& draws, double alpha);

/// Order statistic of an ascending sample, same convention as quantile().
double sorted_quantile(const std::vector<double>& sorted, double alpha);

}  // namespace ustatboot
