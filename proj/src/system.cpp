#include "invsched/system.hpp"

#include <string>

#include "invsched/errors.hpp"

namespace invsched {

namespace {

void check_vector(const Eigen::VectorXd& v, int expected, const char* name) {
  if (v.size() != expected) {
    throw DimensionMismatch(std::string(name) + " has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(expected));
  }
}

void check_set(const HPolytope& P, int dim, const char* name) {
  if (P.dim() != dim) {
    throw DimensionMismatch(std::string(name) + " has dimension " + std::to_string(P.dim()) +
                            ", expected " + std::to_string(dim));
  }
  if (is_empty(P)) throw InvalidSystem(std::string(name) + " is empty");
  if (!is_bounded(P)) throw InvalidSystem(std::string(name) + " is unbounded");
}

}  // namespace

LinearSystem::LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd E,
                           Eigen::MatrixXd C, HPolytope X, HPolytope U, HPolytope W,
                           double sample_minutes)
    : A_(std::move(A)),
      B_(std::move(B)),
      E_(std::move(E)),
      C_(std::move(C)),
      X_(std::move(X)),
      U_(std::move(U)),
      W_(std::move(W)),
      sample_minutes_(sample_minutes) {
  const auto n = A_.rows();
  if (n == 0 || A_.cols() != n) throw DimensionMismatch("A must be square and nonempty");
  if (B_.rows() != n) throw DimensionMismatch("B must have as many rows as A");
  if (E_.rows() != n) throw DimensionMismatch("E must have as many rows as A");
  if (C_.cols() != n) throw DimensionMismatch("C must have as many columns as A");
  if (B_.cols() == 0 || E_.cols() == 0 || C_.rows() == 0) {
    throw DimensionMismatch("B, E and C need at least one input, disturbance and output");
  }
  check_set(X_, static_cast<int>(n), "state constraint X");
  check_set(U_, static_cast<int>(B_.cols()), "input constraint U");
  check_set(W_, static_cast<int>(E_.cols()), "disturbance set W");
}

Eigen::VectorXd LinearSystem::step(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& w) const {
  check_vector(x, state_dim(), "state");
  check_vector(u, input_dim(), "input");
  check_vector(w, disturbance_dim(), "disturbance");
  return A_ * x + B_ * u + E_ * w;
}

Eigen::VectorXd LinearSystem::output(const Eigen::VectorXd& x) const {
  check_vector(x, state_dim(), "state");
  return C_ * x;
}

ApsCoefficients aps_coefficients() {
  ApsCoefficients c{};
  c.gain = -2.0;
  c.a1 = -0.965 * 2.0 - 0.98;
  c.a2 = 2.0 * 0.98 * 0.965 + 0.965 * 0.965;
  c.a3 = -0.98 * 0.965 * 0.965;
  return c;
}

LinearSystem aps_model(ApsVariant variant) {
  const ApsCoefficients c = aps_coefficients();
  Eigen::Matrix3d A;
  A << -c.a1, -c.a2, -c.a3,  //
      1.0, 0.0, 0.0,         //
      0.0, 1.0, variant == ApsVariant::Printed ? 1.0 : 0.0;
  const Eigen::Vector3d B(c.gain, 0.0, 0.0);
  const Eigen::Vector3d E(0.0, 0.0, 1.0);
  Eigen::RowVector3d C(0.0, 0.0, 1.0);
  return LinearSystem(A, B, E, C, HPolytope::box(3, -30.0, 30.0), HPolytope::box(1, -10.0, 100.0),
                      HPolytope::box(1, 0.0, 10.0));
}

LinearSystem scalar_demo_model() {
  return LinearSystem(Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::MatrixXd::Ones(1, 1),
                      Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1),
                      HPolytope::box(1, -1.0, 1.0), HPolytope::box(1, -1.0, 1.0),
                      HPolytope::box(1, 0.0, 0.0));
}

}  // namespace invsched
