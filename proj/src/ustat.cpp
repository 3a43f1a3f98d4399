#include "ustatboot/ustat.hpp"

#include "ustatboot/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace ustatboot {

namespace {

void require_rows(const DataMatrix& data, Index minimum, const char* what) {
  if (data.n() < minimum) {
    throw SampleSizeError(std::string(what) + ": need at least " + std::to_string(minimum) +
                          " observations, got " + std::to_string(data.n()));
  }
}

void require_dim(const DataMatrix& data, const Kernel& kernel, const char* what) {
  if (data.p() != kernel.p()) {
    throw DimensionError(std::string(what) + ": data has p = " + std::to_string(data.p()) +
                         " but kernel has p = " + std::to_string(kernel.p()));
  }
}

double pair_count(Index n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

Matrix sample_covariance(const Matrix& x) {
  const Vector mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - mean.transpose();
  Matrix s = centered.transpose() * centered;
  s /= static_cast<double>(x.rows() - 1);
  return s;
}

// sum_{i<j} h(X_i, X_j) for the Kendall kernel. With s = sign(X_i - X_j),
// 2 * 1{s_m s_k > 0} = s_m s_k + s_m^2 s_k^2 for s in {-1, 0, 1}.
Matrix kendall_pair_sum(const Matrix& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  Matrix acc = Matrix::Zero(p, p);
  double untied_rows = 0.0;
  Matrix signs;
  for (Index i = 0; i + 1 < n; ++i) {
    const Index r = n - i - 1;
    signs = (x.bottomRows(r).rowwise() - x.row(i)).array().sign().matrix();
    acc.noalias() += signs.transpose() * signs;
    const Matrix magnitude = signs.cwiseAbs();
    if (magnitude.minCoeff() > 0.0) {
      untied_rows += static_cast<double>(r);
    } else {
      acc.noalias() += magnitude.transpose() * magnitude;
    }
  }
  acc.array() += untied_rows;
  return acc;
}

}  // namespace

SymMatrix compute_u_pairwise(const DataMatrix& data, const Kernel& kernel) {
  require_rows(data, 2, "compute_u");
  require_dim(data, kernel, "compute_u");
  const Index n = data.n();
  Matrix acc = Matrix::Zero(data.p(), data.p());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) acc += kernel.eval(data.row(i), data.row(j)).matrix();
  }
  acc /= pair_count(n);
  return SymMatrix(std::move(acc));
}

UStatResult compute_u(const DataMatrix& data, const Kernel& kernel) {
  require_rows(data, 2, "compute_u");
  require_dim(data, kernel, "compute_u");
  switch (kernel.kind()) {
    case KernelKind::Covariance:
      return {SymMatrix(sample_covariance(data.rows())), data.n(), kernel};
    case KernelKind::KendallTau: {
      Matrix acc = kendall_pair_sum(data.rows());
      acc /= pair_count(data.n());
      return {SymMatrix(std::move(acc)), data.n(), kernel};
    }
    case KernelKind::Custom:
      break;
  }
  return {compute_u_pairwise(data, kernel), data.n(), kernel};
}

SymMatrix kendall_tau_matrix(const DataMatrix& data) {
  UStatResult r = compute_u(data, Kernel::kendall_tau(data.p()));
  return r.u - SymMatrix::constant(data.p(), 1.0);
}

double max_entry(const SymMatrix& m, Sidedness side) {
  return side == Sidedness::SignedMax ? m.matrix().maxCoeff() : sup_norm(m);
}

double sup_stat(const UStatResult& u, const SymMatrix& target, bool off_diag_only,
                Sidedness side) {
  if (target.dim() != u.u.dim()) {
    throw DimensionError("sup_stat: target dimension does not match U");
  }
  const SymMatrix diff = u.u - target;
  if (off_diag_only) return off_sup_norm(diff);
  return std::sqrt(static_cast<double>(u.n)) * max_entry(diff, side) / 2.0;
}

EmpiricalHoeffding::EmpiricalHoeffding(DataMatrix data, Kernel kernel)
    : data_(std::move(data)), kernel_(std::move(kernel)) {
  require_rows(data_, 3, "empirical_hoeffding");
  require_dim(data_, kernel_, "empirical_hoeffding");
  const Index n = data_.n();
  const Index p = data_.p();
  std::vector<Matrix> row_sums(static_cast<std::size_t>(n), Matrix::Zero(p, p));
  Matrix total = Matrix::Zero(p, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const SymMatrix h = kernel_.eval(data_.row(i), data_.row(j));
      row_sums[static_cast<std::size_t>(i)] += h.matrix();
      row_sums[static_cast<std::size_t>(j)] += h.matrix();
      total += h.matrix();
    }
  }
  h_bar_ = trusted_symmetric(total / pair_count(n));
  h1_.reserve(static_cast<std::size_t>(n));
  g_.reserve(static_cast<std::size_t>(n));
  for (auto& s : row_sums) {
    h1_.push_back(trusted_symmetric(s / static_cast<double>(n - 1)));
    g_.push_back(h1_.back() - h_bar_);
  }
}

SymMatrix EmpiricalHoeffding::f_hat(Index i, Index j) const {
  if (i == j || i < 0 || j < 0 || i >= n() || j >= n()) {
    throw IndexError("EmpiricalHoeffding::f_hat: need distinct in-range indices");
  }
  SymMatrix f = kernel_.eval(data_.row(i), data_.row(j));
  f -= h1_[static_cast<std::size_t>(i)];
  f -= h1_[static_cast<std::size_t>(j)];
  f += h_bar_;
  return f;
}

EmpiricalHoeffding empirical_hoeffding(const DataMatrix& data, const Kernel& kernel) {
  return EmpiricalHoeffding(data, kernel);
}

SymMatrix population_g_covariance(const VectorView& x, const SymMatrix& sigma) {
  if (x.size() != sigma.dim()) {
    throw DimensionError("population_g_covariance: vector length does not match sigma");
  }
  return trusted_symmetric(0.5 * (x * x.transpose() - sigma.matrix()));
}

SymMatrix population_canonical_part(const DataMatrix& data, const Kernel& kernel,
                                    const ProjectionFunction& g, const SymMatrix& mean_h) {
  require_rows(data, 2, "population_canonical_part");
  require_dim(data, kernel, "population_canonical_part");
  if (mean_h.dim() != data.p()) {
    throw DimensionError("population_canonical_part: mean_h dimension mismatch");
  }
  const Index n = data.n();
  std::vector<Matrix> gs;
  gs.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) gs.push_back(g(data.row(i)).matrix());
  Matrix acc = Matrix::Zero(data.p(), data.p());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      acc += kernel.eval(data.row(i), data.row(j)).matrix() - gs[static_cast<std::size_t>(i)] -
             gs[static_cast<std::size_t>(j)] - mean_h.matrix();
    }
  }
  acc /= pair_count(n);
  return SymMatrix(std::move(acc));
}

SymMatrix population_canonical_covariance(const DataMatrix& data) {
  require_rows(data, 2, "population_canonical_covariance");
  const Matrix& x = data.rows();
  const Vector s = x.colwise().sum();
  Matrix acc = -0.5 * (s * s.transpose() - x.transpose() * x);
  acc /= pair_count(data.n());
  return SymMatrix(std::move(acc));
}

}  // namespace ustatboot
