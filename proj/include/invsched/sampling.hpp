#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "invsched/polytope.hpp"

namespace invsched {

/**
 * Hit-and-run random walk over a bounded, full-dimensional polytope.
 *
 * The walk starts at the Chebyshev center and discards `burn_in` steps. Each
 * step draws an isotropic direction, intersects the line with the polytope and
 * moves to a uniform point on the resulting chord. Seeded runs are reproducible.
 */
class HitAndRunSampler {
 public:
  HitAndRunSampler(HPolytope polytope, std::uint64_t seed, int burn_in = 100);

  Eigen::VectorXd next();
  std::vector<Eigen::VectorXd> draw(int count);

  const Eigen::VectorXd& center() const { return center_; }

 private:
  // Parameter range [lo, hi] of x + t d inside the polytope.
  std::pair<double, double> chord(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const;
  Eigen::VectorXd random_direction();

  HPolytope polytope_;
  std::mt19937_64 rng_;
  Eigen::VectorXd center_;
  Eigen::VectorXd current_;
};

/**
 * Points close to the boundary: hit-and-run samples pushed along a random
 * direction to within `gap` (relative to the chord) of the boundary.
 */
std::vector<Eigen::VectorXd> boundary_samples(const HPolytope& polytope, int count,
                                              std::uint64_t seed, double gap = 1e-6);

}  // namespace invsched
