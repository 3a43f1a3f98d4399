#include "ustatboot/bootstrap.hpp"

#include "ustatboot/error.hpp"
#include "ustatboot/parallel.hpp"
#include "ustatboot/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ustatboot {

std::pair<DataMatrix, DataMatrix> split_sample(const DataMatrix& data, Rng& rng) {
  if (data.n() < 4) {
    throw SampleSizeError("split_sample: need at least 4 rows, got " + std::to_string(data.n()));
  }
  std::vector<Index> order(static_cast<std::size_t>(data.n()));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto half = static_cast<std::ptrdiff_t>(data.n() / 2);
  std::vector<Index> main(order.begin(), order.begin() + half);
  std::vector<Index> train(order.begin() + half, order.begin() + 2 * half);
  return {data.select(main), data.select(train)};
}

namespace {

std::vector<SymMatrix> mean_kernel_against(const DataMatrix& main, const DataMatrix& train,
                                           const Kernel& kernel) {
  const Index n = main.n();
  const Index p = main.p();
  const double inv_n = 1.0 / static_cast<double>(train.n());
  std::vector<SymMatrix> out;
  out.reserve(static_cast<std::size_t>(n));
  const Matrix& xt = train.rows();

  switch (kernel.kind()) {
    case KernelKind::Covariance: {
      const Vector m = xt.colwise().mean();
      const Matrix m2 = xt.transpose() * xt * inv_n;
      for (Index i = 0; i < n; ++i) {
        const Vector x = main.row(i).transpose();
        Matrix h = x * x.transpose() - x * m.transpose() - m * x.transpose() + m2;
        out.push_back(SymMatrix(0.5 * h));
      }
      return out;
    }
    case KernelKind::KendallTau: {
      Matrix signs;
      for (Index i = 0; i < n; ++i) {
        signs = (xt.rowwise() - main.row(i)).array().sign().matrix();
        Matrix h = signs.transpose() * signs;
        const Matrix magnitude = signs.cwiseAbs();
        if (magnitude.minCoeff() > 0.0) {
          h.array() += static_cast<double>(xt.rows());
        } else {
          h.noalias() += magnitude.transpose() * magnitude;
        }
        out.push_back(trusted_symmetric(h * inv_n));
      }
      return out;
    }
    case KernelKind::Custom:
      break;
  }
  for (Index i = 0; i < n; ++i) {
    Matrix acc = Matrix::Zero(p, p);
    for (Index j = 0; j < train.n(); ++j) acc += kernel.eval(main.row(i), train.row(j)).matrix();
    out.push_back(SymMatrix(acc * inv_n));
  }
  return out;
}

}  // namespace

DecoupledGEstimates estimate_g_decoupled(const DataMatrix& main, const DataMatrix& train,
                                         const Kernel& kernel) {
  if (main.n() != train.n() || main.p() != train.p()) {
    throw DimensionError("estimate_g_decoupled: main and train halves differ in shape");
  }
  if (main.p() != kernel.p()) {
    throw DimensionError("estimate_g_decoupled: kernel dimension does not match data");
  }
  if (main.n() < 2) throw SampleSizeError("estimate_g_decoupled: need n >= 2");

  DecoupledGEstimates g;
  g.n = main.n();
  g.p = main.p();
  g.train_u = compute_u(train, kernel).u;
  g.g_hat = mean_kernel_against(main, train, kernel);
  for (auto& gi : g.g_hat) gi -= g.train_u;
  return g;
}

Matrix multiplier_matrix(Index n, std::size_t b, std::uint64_t master, std::size_t workers) {
  Matrix e(n, static_cast<Index>(b));
  const Rng root(master);
  parallel_for(b, workers, [&](std::size_t d) {
    Rng stream = root.substream(d);
    for (Index i = 0; i < n; ++i) e(i, static_cast<Index>(d)) = stream.normal();
  });
  return e;
}

BootstrapDraws draw_bootstrap_with(const DecoupledGEstimates& g, const Matrix& multipliers,
                                   BootstrapScaling scaling, Restriction restriction) {
  if (multipliers.rows() != g.n || static_cast<Index>(g.g_hat.size()) != g.n) {
    throw DimensionError("draw_bootstrap: multiplier rows must equal n");
  }
  if (multipliers.cols() < 1) throw DomainError("draw_bootstrap: need at least one draw");
  if (restriction == Restriction::OffDiagonal && g.p < 2) {
    throw DomainError("draw_bootstrap: off-diagonal restriction needs p >= 2");
  }

  const VechIndex vi(g.p);
  std::vector<Index> coords;
  for (Index c = 0; c < vi.size(); ++c) {
    if (restriction == Restriction::All || !vi.is_diagonal(c)) coords.push_back(c);
  }
  // G is the n x p'' matrix of selected vech coordinates, one row per g_i.
  Matrix big_g(g.n, static_cast<Index>(coords.size()));
  for (Index i = 0; i < g.n; ++i) {
    const Matrix& gi = g.g_hat[static_cast<std::size_t>(i)].matrix();
    for (std::size_t c = 0; c < coords.size(); ++c) {
      const auto [r, s] = vi.pair(coords[c]);
      big_g(i, static_cast<Index>(c)) = gi(r, s);
    }
  }
  const Matrix sums = big_g.transpose() * multipliers;

  BootstrapDraws out;
  out.scaling = scaling;
  out.restriction = restriction;
  out.values.resize(static_cast<std::size_t>(multipliers.cols()));
  const double nd = static_cast<double>(g.n);
  for (Index d = 0; d < sums.cols(); ++d) {
    const double v = scaling == BootstrapScaling::Raw
                         ? sums.col(d).maxCoeff() / std::sqrt(nd)
                         : 2.0 * sums.col(d).cwiseAbs().maxCoeff() / nd;
    out.values[static_cast<std::size_t>(d)] = v;
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

BootstrapDraws draw_bootstrap(const DecoupledGEstimates& g, std::size_t b,
                              BootstrapScaling scaling, Restriction restriction, Rng& rng,
                              const BootstrapOptions& options) {
  if (b < 1) throw DomainError("draw_bootstrap: need b >= 1");
  const std::uint64_t master = rng.next_u64();
  return draw_bootstrap_with(g, multiplier_matrix(g.n, b, master, options.workers), scaling,
                             restriction);
}

double sorted_quantile(const std::vector<double>& sorted, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("quantile: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (sorted.empty()) throw DomainError("quantile: empty sample");
  const double b = static_cast<double>(sorted.size());
  // The small offset keeps products like 0.07 * 100 from rounding up a rank.
  auto k = static_cast<std::size_t>(std::ceil(alpha * b - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

QuantileEstimate quantile(const BootstrapDraws& draws, double alpha) {
  return {alpha, sorted_quantile(draws.values, alpha), draws.values.size()};
}

}  // namespace ustatboot
