#pragma once

#include <Eigen/Dense>

namespace invsched::lp {

/// Relative feasibility / optimality tolerance.
inline constexpr double kFeasibilityTol = 1e-9;
/// Entries smaller than this are never pivoted on.
inline constexpr double kPivotTol = 1e-11;

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

/**
 * maximize objective . x  subject to  constraints * x <= rhs,  x free.
 *
 * Minimization is expressed by negating the objective.
 */
struct Problem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd rhs;
};

/// `value` and `point` are meaningful only when status is Optimal.
struct Solution {
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd point;

  bool optimal() const { return status == Status::Optimal; }
};

/**
 * Solves a dense LP with the two-phase simplex method under Bland's rule.
 *
 * The problem has few variables and possibly many rows, so the simplex runs on
 * the dual (min rhs.y s.t. constraints^T y = objective, y >= 0), whose tableau
 * has one row per variable. The primal point is recovered from the optimal
 * dual basis. When the dual is infeasible a Farkas LP separates an infeasible
 * primal from an unbounded one.
 *
 * Throws DimensionMismatch on inconsistent shapes, std::invalid_argument on
 * non-finite data and NumericalFailure when the iteration cap 50*(m+d) is hit.
 */
Solution solve(const Problem& problem);

}  // namespace invsched::lp
