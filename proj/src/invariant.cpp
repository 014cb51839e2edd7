#include "invsched/invariant.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "invsched/errors.hpp"

namespace invsched {

HPolytope pre_robust(const LinearSystem& sys, const HPolytope& target) {
  const int n = sys.state_dim();
  const int m = sys.input_dim();
  if (target.dim() != n) {
    throw DimensionMismatch("pre_robust: target has dimension " + std::to_string(target.dim()) +
                            ", expected " + std::to_string(n));
  }

  // Worst-case disturbance tightening of each target row.
  Eigen::VectorXd tightened = target.h();
  for (int i = 0; i < target.rows(); ++i) {
    const Eigen::VectorXd direction = sys.E().transpose() * target.H().row(i).transpose();
    if (!direction.isZero(0.0)) tightened[i] -= support(sys.W(), direction);
  }

  const HPolytope& U = sys.U();
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(target.rows() + U.rows(), n + m);
  lifted.topLeftCorner(target.rows(), n) = target.H() * sys.A();
  lifted.topRightCorner(target.rows(), m) = target.H() * sys.B();
  lifted.bottomRightCorner(U.rows(), m) = U.H();
  Eigen::VectorXd rhs(target.rows() + U.rows());
  rhs << tightened, U.h();

  std::vector<int> keep(static_cast<std::size_t>(n));
  std::iota(keep.begin(), keep.end(), 0);
  return project(HPolytope(std::move(lifted), std::move(rhs)), keep);
}

InvariantResult max_invariant(const LinearSystem& sys, const InvariantOptions& options) {
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be positive");

  InvariantResult result{remove_redundancies(sys.X()), 0, false, {}};
  if (options.keep_iterates) result.iterates.push_back(result.set);

  for (int k = 1; k <= options.max_iter; ++k) {
    HPolytope next = intersect(pre_robust(sys, result.set), sys.X());
    if (is_empty(next)) {
      throw EmptyInvariant("invariant-set iterate " + std::to_string(k) +
                           " is empty: no robust control invariant set exists in X");
    }
    next = remove_redundancies(next);
    if (options.keep_iterates) result.iterates.push_back(next);
    const bool fixpoint = equals(next, result.set);
    result.set = std::move(next);
    result.iterations = k;
    if (fixpoint) {
      result.converged = true;
      break;
    }
  }
  return result;
}

InvariantResult max_invariant(const LinearSystem& sys, int max_iter) {
  return max_invariant(sys, InvariantOptions{max_iter, false});
}

}  // namespace invsched
