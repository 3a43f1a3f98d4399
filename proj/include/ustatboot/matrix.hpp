#pragma once

// Dense symmetric-matrix primitives shared by every other module.

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace ustatboot {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric p x p matrix. Symmetry is enforced on construction by
/// replacing the input with (M + M^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Zero matrix of the given dimension.
  explicit SymMatrix(Index dim);
  explicit SymMatrix(Matrix m);

  static SymMatrix identity(Index dim);
  static SymMatrix diagonal(const Vector& diag);
  static SymMatrix constant(Index dim, double value);

  Index dim() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  /// Writes both (i,j) and (j,i).
  void set(Index i, Index j, double value);

  const Matrix& matrix() const noexcept { return m_; }

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double scale);

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.m_ == b.m_; }

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  friend SymMatrix trusted_symmetric(Matrix m);

  Matrix m_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(SymMatrix a, double scale);
SymMatrix operator*(double scale, SymMatrix a);

/// Wraps a matrix the caller has built symmetric by construction (for
/// example X^T X). Skips the symmetrization pass; used on hot paths.
SymMatrix trusted_symmetric(Matrix m);

/// n x p sample, one observation per row.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix rows);

  Index n() const noexcept { return rows_.rows(); }
  Index p() const noexcept { return rows_.cols(); }
  auto row(Index i) const { return rows_.row(i); }
  const Matrix& rows() const noexcept { return rows_; }

  /// Rows selected by index, in the given order.
  DataMatrix select(const std::vector<Index>& indices) const;

 private:
  Matrix rows_;
};

/// Column-major enumeration of the lower triangle of a p x p matrix:
/// (0,0), (1,0), ..., (p-1,0), (1,1), (2,1), ..., (p-1,p-1).
class VechIndex {
 public:
  explicit VechIndex(Index p);

  Index p() const noexcept { return p_; }
  Index size() const noexcept { return p_ * (p_ + 1) / 2; }

  /// Zero-based position of (j, k), j >= k.
  Index index(Index j, Index k) const;
  /// Inverse of index(); returns (j, k) with j >= k.
  std::pair<Index, Index> pair(Index idx) const;
  /// True for positions that sit on the diagonal.
  bool is_diagonal(Index idx) const { return diagonal_[static_cast<std::size_t>(idx)]; }

 private:
  Index p_;
  std::vector<std::pair<Index, Index>> pairs_;
  std::vector<bool> diagonal_;
};

/// Half-vectorization position for 1-based indices 1 <= k <= j <= p.
Index vech_index(Index j, Index k, Index p);

Vector vech(const SymMatrix& m);
SymMatrix unvech(const Vector& v, Index p);

double sup_norm(const SymMatrix& m);
/// Max |M_mk| over m != k. Requires p >= 2.
double off_sup_norm(const SymMatrix& m);
double frobenius_norm(const SymMatrix& m);
/// Max column absolute sum.
double matrix_l1_norm(const SymMatrix& m);

struct SpectralOptions {
  double tol = 1e-9;
  std::size_t max_iterations = 10'000;
};

/// Largest absolute eigenvalue, by power iteration.
double spectral_norm(const SymMatrix& m, const SpectralOptions& options = {});

/// Lower-triangular L with L L^T = M. Throws NotPositiveDefinite.
Matrix cholesky(const SymMatrix& m);

/// Maximum relative asymmetry tolerated before construction warns.
inline constexpr double kAsymmetryWarnTolerance = 1e-12;

/// Number of asymmetry warnings emitted so far (process-wide).
std::size_t asymmetry_warning_count() noexcept;

}  // namespace ustatboot
