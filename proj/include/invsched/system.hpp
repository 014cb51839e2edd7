#pragma once

#include <Eigen/Dense>

#include "invsched/polytope.hpp"

namespace invsched {

/**
 * Constrained, disturbed discrete-time plant
 *
 *     x+ = A x + B u + E w,    y = C x,
 *
 * with x in X, u in U, w in W. Construction validates that the dimensions
 * agree and that X, U and W are nonempty and bounded.
 */
class LinearSystem {
 public:
  LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd E, Eigen::MatrixXd C,
               HPolytope X, HPolytope U, HPolytope W, double sample_minutes = 5.0);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const Eigen::MatrixXd& E() const { return E_; }
  const Eigen::MatrixXd& C() const { return C_; }
  const HPolytope& X() const { return X_; }
  const HPolytope& U() const { return U_; }
  const HPolytope& W() const { return W_; }
  /// Display metadata only; the dynamics are on an abstract step grid.
  double sample_minutes() const { return sample_minutes_; }

  int state_dim() const { return static_cast<int>(A_.rows()); }
  int input_dim() const { return static_cast<int>(B_.cols()); }
  int disturbance_dim() const { return static_cast<int>(E_.cols()); }
  int output_dim() const { return static_cast<int>(C_.rows()); }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& w) const;
  Eigen::VectorXd output(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd A_, B_, E_, C_;
  HPolytope X_, U_, W_;
  double sample_minutes_;
};

enum class ApsVariant {
  Printed,    ///< A as printed, bottom row (0, 1, 1)
  Companion,  ///< companion form, bottom row (0, 1, 0)
};

/// Coefficients of the insulin-glucose deviation model.
struct ApsCoefficients {
  double gain;  // K
  double a1, a2, a3;
};

ApsCoefficients aps_coefficients();

/// Third-order insulin-glucose deviation model with its input, state and meal bounds.
LinearSystem aps_model(ApsVariant variant = ApsVariant::Printed);

/// x+ = 0.5 x + u with X = U = [-1, 1] and W = {0}.
LinearSystem scalar_demo_model();

}  // namespace invsched
