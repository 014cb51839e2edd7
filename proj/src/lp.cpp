#include "invsched/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "invsched/errors.hpp"

namespace invsched::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct StandardResult {
  Status status = Status::Infeasible;
  VectorXd y;      // primal values of the standard-form problem
  VectorXd duals;  // simplex multipliers of the equality rows
};

double inf_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// min cost.y  s.t.  A y = b,  y >= 0.  Dense tableau, two phases, Bland's rule.
StandardResult solve_standard(const MatrixXd& A, const VectorXd& b, const VectorXd& cost,
                              long iteration_cap) {
  const Index m = A.rows();
  const Index n = A.cols();
  const Index rhs = n + m;

  VectorXd sign(m);
  for (Index i = 0; i < m; ++i) sign[i] = b[i] < 0.0 ? -1.0 : 1.0;

  MatrixXd T(m, n + m + 1);
  T.leftCols(n) = sign.asDiagonal() * A;
  T.middleCols(n, m).setIdentity();
  T.col(rhs) = sign.cwiseProduct(b);

  std::vector<Index> basis(static_cast<std::size_t>(m));
  std::vector<bool> is_basic(static_cast<std::size_t>(n + m), false);
  for (Index i = 0; i < m; ++i) {
    basis[i] = n + i;
    is_basic[n + i] = true;
  }

  long iterations = 0;

  auto pivot = [&](Index r, Index c) {
    T.row(r) /= T(r, c);
    for (Index i = 0; i < m; ++i) {
      if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
    }
    is_basic[basis[r]] = false;
    basis[r] = c;
    is_basic[c] = true;
  };

  // Returns false when the objective is unbounded below.
  auto optimize = [&](const VectorXd& full_cost, Index allowed) {
    const double tol = kFeasibilityTol * (1.0 + inf_norm(full_cost.head(allowed)));
    VectorXd cb(m);
    while (true) {
      for (Index i = 0; i < m; ++i) cb[i] = full_cost[basis[i]];
      const Eigen::RowVectorXd reduced =
          full_cost.head(allowed).transpose() - cb.transpose() * T.leftCols(allowed);

      Index enter = -1;
      for (Index j = 0; j < allowed; ++j) {
        if (!is_basic[j] && reduced[j] < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        const double a = T(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(T(i, rhs), 0.0) / a;
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (leave < 0 || ratio < best - slack) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + slack && basis[i] < basis[leave]) {
          leave = i;
        }
      }
      if (leave < 0) return false;

      if (++iterations > iteration_cap) {
        throw NumericalFailure("simplex exceeded its iteration cap of " +
                               std::to_string(iteration_cap));
      }
      pivot(leave, enter);
    }
  };

  StandardResult result;

  // Phase 1: minimise the sum of artificials.
  VectorXd phase1 = VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  optimize(phase1, n + m);
  double artificial_sum = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (basis[i] >= n) artificial_sum += std::max(T(i, rhs), 0.0);
  }
  if (artificial_sum > kFeasibilityTol * (1.0 + inf_norm(b))) {
    result.status = Status::Infeasible;
    return result;
  }

  // Drive zero-level artificials out of the basis where a real column allows it.
  // Rows where none does are linearly dependent and keep their artificial at zero.
  for (Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    Index best_col = -1;
    double best_mag = kPivotTol;
    for (Index j = 0; j < n; ++j) {
      if (!is_basic[j] && std::abs(T(i, j)) > best_mag) {
        best_mag = std::abs(T(i, j));
        best_col = j;
      }
    }
    if (best_col >= 0) pivot(i, best_col);
  }

  // Phase 2 over the real columns only.
  VectorXd phase2 = VectorXd::Zero(n + m);
  phase2.head(n) = cost;
  if (!optimize(phase2, n)) {
    result.status = Status::Unbounded;
    return result;
  }

  result.status = Status::Optimal;
  result.y = VectorXd::Zero(n);
  for (Index i = 0; i < m; ++i) {
    if (basis[i] < n) result.y[basis[i]] = std::max(T(i, rhs), 0.0);
  }

  // Multipliers from the original basis columns: B^T pi = c_B.
  MatrixXd basis_matrix(m, m);
  VectorXd cb(m);
  for (Index i = 0; i < m; ++i) {
    const Index col = basis[i];
    if (col < n) {
      basis_matrix.col(i) = sign.cwiseProduct(A.col(col));
    } else {
      basis_matrix.col(i) = VectorXd::Unit(m, col - n);
    }
    cb[i] = phase2[col];
  }
  VectorXd pi = basis_matrix.transpose().colPivHouseholderQr().solve(cb);
  result.duals = sign.cwiseProduct(pi);
  return result;
}

void validate(const Problem& p) {
  if (p.constraints.cols() != p.objective.size()) {
    throw DimensionMismatch("LP constraint matrix has " + std::to_string(p.constraints.cols()) +
                            " columns but the objective has length " +
                            std::to_string(p.objective.size()));
  }
  if (p.constraints.rows() != p.rhs.size()) {
    throw DimensionMismatch("LP constraint matrix has " + std::to_string(p.constraints.rows()) +
                            " rows but the rhs has length " + std::to_string(p.rhs.size()));
  }
  if (!p.objective.allFinite() || !p.constraints.allFinite() || !p.rhs.allFinite()) {
    throw std::invalid_argument("LP data must be finite");
  }
}

}  // namespace

Solution solve(const Problem& problem) {
  validate(problem);
  const Index d = problem.objective.size();
  const Index m = problem.rhs.size();
  const long cap = 50L * static_cast<long>(m + d);

  Solution out;
  if (m == 0) {
    if (problem.objective.isZero(0.0)) {
      out.status = Status::Optimal;
      out.point = VectorXd::Zero(d);
    } else {
      out.status = Status::Unbounded;
    }
    return out;
  }

  const MatrixXd dual_matrix = problem.constraints.transpose();
  const StandardResult dual = solve_standard(dual_matrix, problem.objective, problem.rhs, cap);

  const double scale = 1.0 + inf_norm(problem.rhs);
  switch (dual.status) {
    case Status::Optimal: {
      out.point = dual.duals;
      const double violation = (problem.constraints * out.point - problem.rhs).maxCoeff();
      if (!out.point.allFinite() || violation > 1e-6 * scale) {
        throw NumericalFailure("recovered LP point violates its constraints by " +
                               std::to_string(violation));
      }
      out.status = Status::Optimal;
      out.value = problem.objective.dot(out.point);
      return out;
    }
    case Status::Unbounded:
      out.status = Status::Infeasible;
      return out;
    case Status::Infeasible:
      break;
  }

  // Dual infeasible: the primal is either infeasible or unbounded.
  // Farkas: Ax <= b is infeasible iff min b.y s.t. A^T y = 0, 1.y = 1, y >= 0 is negative.
  MatrixXd farkas(d + 1, m);
  farkas.topRows(d) = dual_matrix;
  farkas.row(d).setOnes();
  VectorXd farkas_rhs = VectorXd::Zero(d + 1);
  farkas_rhs[d] = 1.0;
  const StandardResult certificate = solve_standard(farkas, farkas_rhs, problem.rhs, cap);
  if (certificate.status == Status::Optimal &&
      problem.rhs.dot(certificate.y) < -kFeasibilityTol * scale) {
    out.status = Status::Infeasible;
  } else {
    out.status = Status::Unbounded;
  }
  return out;
}

}  // namespace invsched::lp
