#include "ustatboot/lp.hpp"

#include "ustatboot/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ustatboot {

void LpProblem::validate() const {
  const Index m = a.rows();
  if (objective.size() != a.cols()) {
    throw DimensionError("LpProblem: objective length does not match constraint columns");
  }
  if (rhs.size() != m || static_cast<Index>(sense.size()) != m) {
    throw DimensionError("LpProblem: rhs/sense length does not match constraint rows");
  }
  if (!objective.allFinite() || !a.allFinite() || !rhs.allFinite()) {
    throw DomainError("LpProblem: non-finite data");
  }
}

double lp_violation(const LpProblem& problem, const Vector& x) {
  double worst = std::max(0.0, -x.minCoeff());
  const Vector ax = problem.a * x;
  for (Index i = 0; i < ax.size(); ++i) {
    const double d = ax(i) - problem.rhs(i);
    switch (problem.sense[static_cast<std::size_t>(i)]) {
      case ConstraintSense::LessEqual:
        worst = std::max(worst, d);
        break;
      case ConstraintSense::GreaterEqual:
        worst = std::max(worst, -d);
        break;
      case ConstraintSense::Equal:
        worst = std::max(worst, std::abs(d));
        break;
    }
  }
  return worst;
}

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Simplex {
 public:
  Simplex(const LpProblem& problem, const LpOptions& options)
      : options_(options), m_(problem.a.rows()), n_(problem.a.cols()) {
    Index slacks = 0;
    Index artificials = 0;
    std::vector<ConstraintSense> sense = problem.sense;
    std::vector<double> flip(static_cast<std::size_t>(m_), 1.0);
    for (Index i = 0; i < m_; ++i) {
      auto& s = sense[static_cast<std::size_t>(i)];
      if (problem.rhs(i) < 0.0) {
        flip[static_cast<std::size_t>(i)] = -1.0;
        if (s == ConstraintSense::LessEqual) {
          s = ConstraintSense::GreaterEqual;
        } else if (s == ConstraintSense::GreaterEqual) {
          s = ConstraintSense::LessEqual;
        }
      }
      if (s != ConstraintSense::Equal) ++slacks;
      if (s != ConstraintSense::LessEqual) ++artificials;
    }
    first_artificial_ = n_ + slacks;
    cols_ = first_artificial_ + artificials;
    t_ = Tableau::Zero(m_ + 1, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(m_), 0);

    Index next_slack = n_;
    Index next_art = first_artificial_;
    for (Index i = 0; i < m_; ++i) {
      const double f = flip[static_cast<std::size_t>(i)];
      t_.row(i).head(n_) = f * problem.a.row(i);
      t_(i, cols_) = f * problem.rhs(i);
      switch (sense[static_cast<std::size_t>(i)]) {
        case ConstraintSense::LessEqual:
          t_(i, next_slack) = 1.0;
          basis_[static_cast<std::size_t>(i)] = next_slack++;
          break;
        case ConstraintSense::GreaterEqual:
          t_(i, next_slack++) = -1.0;
          t_(i, next_art) = 1.0;
          basis_[static_cast<std::size_t>(i)] = next_art++;
          break;
        case ConstraintSense::Equal:
          t_(i, next_art) = 1.0;
          basis_[static_cast<std::size_t>(i)] = next_art++;
          break;
      }
    }
    rhs_scale_ = std::max(1.0, problem.rhs.size() ? problem.rhs.cwiseAbs().maxCoeff() : 0.0);
  }

  LpSolution solve(const Vector& objective) {
    LpSolution out;
    // Phase 1: minimize the sum of artificials.
    if (cols_ > first_artificial_) {
      Vector phase1 = Vector::Zero(cols_);
      phase1.tail(cols_ - first_artificial_).setOnes();
      load_objective(phase1);
      if (!run(cols_)) {
        throw NumericError("solve_lp: phase one reported unbounded", iterations_);
      }
      if (-t_(m_, cols_) > options_.feasibility_tolerance * rhs_scale_) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        out.x = Vector::Zero(n_);
        return out;
      }
      evict_artificials();
    }
    Vector phase2 = Vector::Zero(cols_);
    phase2.head(n_) = objective;
    load_objective(phase2);
    const bool bounded = run(first_artificial_);
    out.iterations = iterations_;
    out.x = Vector::Zero(n_);
    for (Index i = 0; i < m_; ++i) {
      const Index b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) out.x(b) = std::max(0.0, t_(i, cols_));
    }
    if (!bounded) {
      out.status = LpStatus::Unbounded;
      out.objective = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.status = LpStatus::Optimal;
    out.objective = objective.dot(out.x);
    return out;
  }

 private:
  void load_objective(const Vector& cost) {
    t_.row(m_).head(cols_) = cost.transpose();
    t_(m_, cols_) = 0.0;
    for (Index i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
      t_(i, col) = 0.0;
    }
    for (Index i = 0; i < m_; ++i) {
      if (t_(i, cols_) < 0.0 && t_(i, cols_) > -1e-11) t_(i, cols_) = 0.0;
    }
    basis_[static_cast<std::size_t>(row)] = col;
    ++iterations_;
  }

  // Columns [0, allowed) may enter. Returns false when unbounded.
  bool run(Index allowed) {
    for (;;) {
      if (iterations_ >= options_.max_iterations) {
        throw NumericError("solve_lp: iteration cap reached", iterations_);
      }
      Index enter = -1;
      for (Index j = 0; j < allowed; ++j) {
        if (t_(m_, j) < -options_.pivot_tolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m_; ++i) {
        const double coef = t_(i, enter);
        if (coef <= options_.pivot_tolerance) continue;
        const double ratio = t_(i, cols_) / coef;
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void evict_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < first_artificial_) continue;
      for (Index j = 0; j < first_artificial_; ++j) {
        if (std::abs(t_(i, j)) > options_.pivot_tolerance) {
          pivot(i, j);
          break;
        }
      }
      // A row with no eligible pivot is redundant; its artificial stays at 0.
    }
  }

  LpOptions options_;
  Index m_;
  Index n_;
  Index first_artificial_ = 0;
  Index cols_ = 0;
  double rhs_scale_ = 1.0;
  Tableau t_;
  std::vector<Index> basis_;
  std::size_t iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  Simplex simplex(problem, options);
  return simplex.solve(problem.objective);
}

}  // namespace ustatboot
