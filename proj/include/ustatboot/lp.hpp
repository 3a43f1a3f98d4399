#pragma once

// Dense two-phase simplex for small linear programs.

#include "ustatboot/matrix.hpp"

#include <cstddef>
#include <vector>

namespace ustatboot {

enum class ConstraintSense { LessEqual, GreaterEqual, Equal };

/// minimize objective^T x  subject to  a.row(i) x (sense_i) rhs_i,  x >= 0.
struct LpProblem {
  Vector objective;
  Matrix a;
  Vector rhs;
  std::vector<ConstraintSense> sense;

  /// Throws DimensionError on inconsistent shapes or non-finite data.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-8;
  std::size_t max_iterations = 100'000;
};

/// Tableau simplex with Bland's rule in both phases. Exceeding
/// max_iterations throws NumericError.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

/// Largest constraint violation of x (0 when feasible); includes x >= 0.
double lp_violation(const LpProblem& problem, const Vector& x);

}  // namespace ustatboot
