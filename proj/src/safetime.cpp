#include "invsched/safetime.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "invsched/errors.hpp"

namespace invsched {

StackedConstraintSystem build_stacked(const LinearSystem& sys, const HPolytope& c_inf,
                                      int horizon) {
  if (horizon < 1) throw std::invalid_argument("build_stacked: horizon must be positive");
  const int n = sys.state_dim();
  if (c_inf.dim() != n) {
    throw DimensionMismatch("build_stacked: invariant set has dimension " +
                            std::to_string(c_inf.dim()) + ", expected " + std::to_string(n));
  }
  const int mu = sys.input_dim();
  const int mw = sys.disturbance_dim();
  const int rc = c_inf.rows();
  const HPolytope& U = sys.U();
  const int ru = U.rows();
  const int j = horizon;

  StackedConstraintSystem out;
  out.horizon = j;
  out.state_dim = n;
  out.input_dim = mu;
  out.disturbance_dim = mw;
  const int total_rows = (j + 1) * rc + j * ru;
  out.M = Eigen::MatrixXd::Zero(total_rows, n + j * mu);
  out.G = Eigen::MatrixXd::Zero(total_rows, j * mw);
  out.P = Eigen::VectorXd::Zero(total_rows);

  // H A^k for k = 0..j
  std::vector<Eigen::MatrixXd> H_Apow;
  H_Apow.reserve(static_cast<std::size_t>(j + 1));
  H_Apow.push_back(c_inf.H());
  for (int k = 1; k <= j; ++k) H_Apow.push_back(H_Apow.back() * sys.A());

  // x_t = A^t x0 + sum_{i<t} A^{t-1-i} (B u_i + E w_i)
  for (int t = 0; t <= j; ++t) {
    const int row = t * rc;
    out.M.block(row, 0, rc, n) = H_Apow[static_cast<std::size_t>(t)];
    for (int i = 0; i < t; ++i) {
      const Eigen::MatrixXd& HAk = H_Apow[static_cast<std::size_t>(t - 1 - i)];
      out.M.block(row, n + i * mu, rc, mu) = HAk * sys.B();
      out.G.block(row, i * mw, rc, mw) = HAk * sys.E();
    }
    out.P.segment(row, rc) = c_inf.h();
  }
  for (int t = 0; t < j; ++t) {
    const int row = (j + 1) * rc + t * ru;
    out.M.block(row, n + t * mu, ru, mu) = U.H();
    out.P.segment(row, ru) = U.h();
  }
  return out;
}

HPolytope tighten(const StackedConstraintSystem& stacked, const HPolytope& W) {
  const int mw = stacked.disturbance_dim;
  if (W.dim() != mw) {
    throw DimensionMismatch("tighten: disturbance set has dimension " + std::to_string(W.dim()) +
                            ", expected " + std::to_string(mw));
  }
  const int dim = static_cast<int>(stacked.M.cols());
  Eigen::VectorXd rhs = stacked.P;
  for (Eigen::Index r = 0; r < stacked.G.rows(); ++r) {
    for (int i = 0; i < stacked.horizon; ++i) {
      const Eigen::VectorXd g = stacked.G.row(r).segment(i * mw, mw).transpose();
      if (g.isZero(0.0)) continue;
      const double s = support(W, g);
      if (std::isinf(s)) return HPolytope::empty(dim);
      rhs[r] -= s;
    }
  }
  return HPolytope(stacked.M, std::move(rhs));
}

HPolytope feasible_set(const LinearSystem& sys, const HPolytope& c_inf, int horizon) {
  const HPolytope tightened = tighten(build_stacked(sys, c_inf, horizon), sys.W());
  std::vector<int> keep(static_cast<std::size_t>(sys.state_dim()));
  std::iota(keep.begin(), keep.end(), 0);
  return project(tightened, keep);
}

SafeTimeResult safe_time(const LinearSystem& sys, const HPolytope& c_inf, int j_max) {
  if (j_max < 1) throw std::invalid_argument("safe_time: j_max must be positive");
  SafeTimeResult result;
  for (int j = 1; j <= j_max; ++j) {
    result.feasible_sets.push_back(feasible_set(sys, c_inf, j));
    if (!equals(result.feasible_sets.back(), c_inf)) {
      if (j == 1) {
        throw InvalidInvariant(
            "X_1 differs from the supplied set, so it is not robust control invariant");
      }
      result.alpha = j - 1;
      return result;
    }
  }
  result.alpha = j_max;
  result.hit_cap = true;
  return result;
}

}  // namespace invsched
