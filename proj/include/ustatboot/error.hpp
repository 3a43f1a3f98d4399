#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ustatboot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree (vector lengths, matrix dimensions).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Too few observations for the requested statistic.
class SampleSizeError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Half-vectorization index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine failed to converge.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t iterations)
      : Error(what), iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Cholesky hit a non-positive pivot.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}

  /// Zero-based index of the failing pivot.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace ustatboot
