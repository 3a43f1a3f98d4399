#include "ustatboot/matrix.hpp"

#include "ustatboot/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace ustatboot {

namespace {

constexpr Index kSpectralBlock = 8;

std::atomic<std::size_t> g_asymmetry_warnings{0};

void check_symmetry(const Matrix& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryWarnTolerance * scale) {
    if (g_asymmetry_warnings.fetch_add(1) == 0) {
      std::clog << "ustatboot: warning: symmetrizing matrix with asymmetry " << asym
                << " (further warnings suppressed)\n";
    }
  }
}

}  // namespace

SymMatrix::SymMatrix(Index dim) : m_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw DimensionError("SymMatrix: dimension must be >= 1");
}

SymMatrix::SymMatrix(Matrix m) {
  if (m.rows() != m.cols()) throw DimensionError("SymMatrix: matrix is not square");
  if (m.rows() < 1) throw DimensionError("SymMatrix: dimension must be >= 1");
  check_symmetry(m);
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Index dim) {
  if (dim < 1) throw DimensionError("SymMatrix: dimension must be >= 1");
  return SymMatrix(Matrix::Identity(dim, dim), Trusted{});
}

SymMatrix SymMatrix::diagonal(const Vector& diag) {
  if (diag.size() < 1) throw DimensionError("SymMatrix: dimension must be >= 1");
  return SymMatrix(Matrix(diag.asDiagonal()), Trusted{});
}

SymMatrix SymMatrix::constant(Index dim, double value) {
  if (dim < 1) throw DimensionError("SymMatrix: dimension must be >= 1");
  return SymMatrix(Matrix::Constant(dim, dim, value), Trusted{});
}

void SymMatrix::set(Index i, Index j, double value) {
  m_(i, j) = value;
  m_(j, i) = value;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.dim() != dim()) throw DimensionError("SymMatrix: dimension mismatch in +=");
  m_ += other.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.dim() != dim()) throw DimensionError("SymMatrix: dimension mismatch in -=");
  m_ -= other.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double scale) {
  m_ *= scale;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(SymMatrix a, double scale) { return a *= scale; }
SymMatrix operator*(double scale, SymMatrix a) { return a *= scale; }

SymMatrix trusted_symmetric(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError("trusted_symmetric: matrix must be square and non-empty");
  }
  return SymMatrix(std::move(m), SymMatrix::Trusted{});
}

std::size_t asymmetry_warning_count() noexcept { return g_asymmetry_warnings.load(); }

DataMatrix::DataMatrix(Matrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw DimensionError("DataMatrix: need at least one row and one column");
  }
}

DataMatrix DataMatrix::select(const std::vector<Index>& indices) const {
  Matrix out(static_cast<Index>(indices.size()), p());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const Index src = indices[r];
    if (src < 0 || src >= n()) throw IndexError("DataMatrix::select: row index out of range");
    out.row(static_cast<Index>(r)) = rows_.row(src);
  }
  return DataMatrix(std::move(out));
}

VechIndex::VechIndex(Index p) : p_(p) {
  if (p < 1) throw DimensionError("VechIndex: dimension must be >= 1");
  pairs_.reserve(static_cast<std::size_t>(size()));
  diagonal_.reserve(static_cast<std::size_t>(size()));
  for (Index k = 0; k < p; ++k) {
    for (Index j = k; j < p; ++j) {
      pairs_.emplace_back(j, k);
      diagonal_.push_back(j == k);
    }
  }
}

Index VechIndex::index(Index j, Index k) const {
  if (k < 0 || j < k || j >= p_) {
    throw IndexError("VechIndex: need 0 <= k <= j < p, got (" + std::to_string(j) + ", " +
                     std::to_string(k) + ")");
  }
  return k * p_ - k * (k - 1) / 2 + (j - k);
}

std::pair<Index, Index> VechIndex::pair(Index idx) const {
  if (idx < 0 || idx >= size()) throw IndexError("VechIndex: position out of range");
  return pairs_[static_cast<std::size_t>(idx)];
}

Index vech_index(Index j, Index k, Index p) {
  if (p < 1 || k < 1 || j < k || j > p) {
    throw IndexError("vech_index: need 1 <= k <= j <= p, got (" + std::to_string(j) + ", " +
                     std::to_string(k) + ", " + std::to_string(p) + ")");
  }
  return VechIndex(p).index(j - 1, k - 1);
}

Vector vech(const SymMatrix& m) {
  const Index p = m.dim();
  Vector out(p * (p + 1) / 2);
  Index pos = 0;
  for (Index k = 0; k < p; ++k) {
    const Index len = p - k;
    out.segment(pos, len) = m.matrix().col(k).tail(len);
    pos += len;
  }
  return out;
}

SymMatrix unvech(const Vector& v, Index p) {
  if (p < 1 || v.size() != p * (p + 1) / 2) {
    throw DimensionError("unvech: vector length does not match p(p+1)/2");
  }
  Matrix out(p, p);
  Index pos = 0;
  for (Index k = 0; k < p; ++k) {
    for (Index j = k; j < p; ++j) {
      out(j, k) = v(pos);
      out(k, j) = v(pos);
      ++pos;
    }
  }
  return trusted_symmetric(std::move(out));
}

double sup_norm(const SymMatrix& m) { return m.matrix().cwiseAbs().maxCoeff(); }

double off_sup_norm(const SymMatrix& m) {
  const Index p = m.dim();
  if (p < 2) throw DomainError("off_sup_norm: no off-diagonal entries when p = 1");
  double best = 0.0;
  for (Index k = 0; k < p; ++k) {
    for (Index j = k + 1; j < p; ++j) best = std::max(best, std::abs(m(j, k)));
  }
  return best;
}

double frobenius_norm(const SymMatrix& m) { return m.matrix().norm(); }

double matrix_l1_norm(const SymMatrix& m) {
  return m.matrix().cwiseAbs().colwise().sum().maxCoeff();
}

double spectral_norm(const SymMatrix& m, const SpectralOptions& options) {
  if (!(options.tol > 0.0)) throw DomainError("spectral_norm: tol must be positive");
  const Index p = m.dim();
  const Matrix& a = m.matrix();
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Block power iteration with Rayleigh-Ritz: the block absorbs clusters of
  // near-equal |lambda| at the top, which stall single-vector iteration.
  // Irregular deterministic start so no eigenvector is missed by accident.
  const Index k = std::min<Index>(p, kSpectralBlock);
  Matrix q(p, k);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < k; ++j) {
      q(i, j) = std::sin(1.7 * static_cast<double>(i + 1) * static_cast<double>(j + 1) + 0.3 * j) +
                (i == j ? 2.0 : 0.0);
    }
  }
  q = Eigen::HouseholderQR<Matrix>(q).householderQ() * Matrix::Identity(p, k);

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const Matrix z = a * q;
    const Matrix h = q.transpose() * z;
    const Eigen::SelfAdjointEigenSolver<Matrix> ritz(0.5 * (h + h.transpose()));
    Index top = 0;
    ritz.eigenvalues().cwiseAbs().maxCoeff(&top);
    const double theta = ritz.eigenvalues()(top);
    const Vector y = ritz.eigenvectors().col(top);
    // For symmetric A the residual bounds the distance to an eigenvalue, and
    // a Ritz value never exceeds max |lambda|.
    const double resid = (z * y - theta * (q * y)).norm();
    if (k == p || resid <= options.tol * std::abs(theta)) return std::abs(theta);
    q = Eigen::HouseholderQR<Matrix>(z).householderQ() * Matrix::Identity(p, k);
  }
  throw NumericError("spectral_norm: power iteration did not converge after " +
                         std::to_string(options.max_iterations) + " iterations",
                     options.max_iterations);
}

Matrix cholesky(const SymMatrix& m) {
  const Index p = m.dim();
  Matrix l = Matrix::Zero(p, p);
  const Matrix& a = m.matrix();
  for (Index j = 0; j < p; ++j) {
    const double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > 0.0)) {
      throw NotPositiveDefinite("cholesky: non-positive pivot " + std::to_string(pivot) +
                                    " at index " + std::to_string(j),
                                static_cast<std::size_t>(j));
    }
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    const Index rest = p - j - 1;
    if (rest > 0) {
      l.col(j).tail(rest) =
          (a.col(j).tail(rest) - l.bottomLeftCorner(rest, j) * l.row(j).head(j).transpose()) / d;
    }
  }
  return l;
}

}  // namespace ustatboot
