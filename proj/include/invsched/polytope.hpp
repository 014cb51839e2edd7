#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

namespace invsched {

/// Membership and set-inclusion tolerance.
inline constexpr double kInclusionTol = 1e-7;
/// Slack used when deciding that a row is implied by the others.
inline constexpr double kRedundancyTol = 1e-9;

/**
 * A convex polyhedron {x : H x <= h} in H-representation.
 *
 * Redundant rows are allowed. A row with H_i = 0 and h_i < 0 encodes the
 * empty set; is_empty() reports it.
 */
class HPolytope {
 public:
  /// Throws DimensionMismatch on shape errors and std::invalid_argument on
  /// non-finite data or zero columns.
  HPolytope(Eigen::MatrixXd H, Eigen::VectorXd h);

  /// The whole space R^dim (no rows).
  static HPolytope universe(int dim);
  /// A canonical empty set of the given dimension.
  static HPolytope empty(int dim);
  /// Axis-aligned box lo <= x <= hi.
  static HPolytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  /// The cube [lo, hi]^dim.
  static HPolytope box(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(H_.cols()); }
  int rows() const { return static_cast<int>(H_.rows()); }
  const Eigen::MatrixXd& H() const { return H_; }
  const Eigen::VectorXd& h() const { return h_; }

 private:
  Eigen::MatrixXd H_;
  Eigen::VectorXd h_;
};

/// H x <= h + tol * (1 + |h|_inf) componentwise.
bool contains(const HPolytope& P, const Eigen::VectorXd& x, double tol = kInclusionTol);

bool is_empty(const HPolytope& P);

/// Row concatenation; represents P n Q exactly.
HPolytope intersect(const HPolytope& P, const HPolytope& Q);

struct SupportPoint {
  double value;  // +inf when unbounded
  Eigen::VectorXd point;  // a maximiser; empty when unbounded
};

/// max{c.x : x in P}, +inf if unbounded. Throws EmptySet if P is empty.
double support(const HPolytope& P, const Eigen::VectorXd& c);
SupportPoint support_point(const HPolytope& P, const Eigen::VectorXd& c);

/// Orthogonal projection onto the coordinates in `keep` (0-based, strictly
/// increasing) by Fourier-Motzkin elimination with redundancy removal after
/// every eliminated coordinate.
HPolytope project(const HPolytope& P, std::span<const int> keep);

/// Eliminates a single coordinate; the result has dim - 1 columns and is not pruned.
HPolytope eliminate(const HPolytope& P, int coordinate);

/// Drops every row implied by the others. Survivors keep their order and scaling.
/// Throws EmptySet if P is empty.
HPolytope remove_redundancies(const HPolytope& P);

/// {x : x + s in P for all s in S}. Throws EmptySet if either operand is empty.
HPolytope pontryagin_diff(const HPolytope& P, const HPolytope& S);

/// P subset-of Q, tested row by row on Q with unit-normalised rows.
bool is_subset(const HPolytope& P, const HPolytope& Q, double tol = kInclusionTol);

bool equals(const HPolytope& P, const HPolytope& Q, double tol = kInclusionTol);

/// True when the support in every +/- unit direction is finite. False for empty sets.
bool is_bounded(const HPolytope& P);

struct Ball {
  Eigen::VectorXd center;
  double radius;
};

/// Largest inscribed Euclidean ball, radius capped at `radius_cap`.
/// Returns nullopt when P is empty.
std::optional<Ball> chebyshev_ball(const HPolytope& P, double radius_cap = 1.0);

}  // namespace invsched
