#pragma once

#include <vector>

#include <Eigen/Dense>

#include "invsched/polytope.hpp"
#include "invsched/system.hpp"

namespace invsched {

/**
 * Open-loop horizon-j constraints over z = (x0, u_0, ..., u_{j-1}):
 *
 *     M z <= P - G w_hat,   w_hat = (w_0, ..., w_{j-1}).
 *
 * Rows are the invariant-set constraints on x_0 .. x_j (states expanded via
 * the input/disturbance convolution) followed by the input constraints on
 * u_0 .. u_{j-1}.
 */
struct StackedConstraintSystem {
  Eigen::MatrixXd M;  ///< rows x (n + j * m_u)
  Eigen::VectorXd P;
  Eigen::MatrixXd G;  ///< rows x (j * m_w)
  int horizon = 0;
  int state_dim = 0;
  int input_dim = 0;
  int disturbance_dim = 0;
};

StackedConstraintSystem build_stacked(const LinearSystem& sys, const HPolytope& c_inf, int horizon);

/**
 * Replaces P_r by P_r - max{G_r . w_hat : w_hat in W^j}. The maximum separates
 * over steps, so it is a sum of per-step supports of W. The result lives in
 * (x0, u_hat) space and may be empty.
 */
HPolytope tighten(const StackedConstraintSystem& stacked, const HPolytope& W);

/// Initial states in c_inf that admit a j-step open-loop input sequence keeping
/// x_1 .. x_j in c_inf for every disturbance sequence.
HPolytope feasible_set(const LinearSystem& sys, const HPolytope& c_inf, int horizon);

struct SafeTimeResult {
  int alpha = 0;
  /// X_1, X_2, ... up to the first failing horizon (or the cap).
  std::vector<HPolytope> feasible_sets;
  bool hit_cap = false;
};

/**
 * Largest j <= j_max with X_j = c_inf, scanning j = 1, 2, ... and stopping at
 * the first failure. Throws InvalidInvariant if X_1 differs from c_inf.
 */
SafeTimeResult safe_time(const LinearSystem& sys, const HPolytope& c_inf, int j_max);

}  // namespace invsched
