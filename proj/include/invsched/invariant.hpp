#pragma once

#include <vector>

#include "invsched/polytope.hpp"
#include "invsched/system.hpp"

namespace invsched {

/**
 * Robust controllable predecessor
 *
 *     {x : exists u in U such that A x + B u + E w in target for all w in W}.
 *
 * Target rows are first tightened by the support of W along E^T H_i, then
 * the lifted (x, u) polytope is projected onto x. The result may be empty.
 */
HPolytope pre_robust(const LinearSystem& sys, const HPolytope& target);

struct InvariantOptions {
  int max_iter = 50;
  /// Record every iterate Omega_0 = X, Omega_1, ... in the result.
  bool keep_iterates = false;
};

struct InvariantResult {
  HPolytope set;  ///< maximal robust control invariant set (last iterate if not converged)
  int iterations = 0;
  bool converged = false;
  std::vector<HPolytope> iterates;
};

/**
 * Outer fixpoint recursion Omega_0 = X, Omega_{k+1} = pre_robust(Omega_k) n X,
 * stopping when two successive iterates are equal. Throws EmptyInvariant when
 * an iterate becomes empty.
 */
InvariantResult max_invariant(const LinearSystem& sys, const InvariantOptions& options = {});
InvariantResult max_invariant(const LinearSystem& sys, int max_iter);

}  // namespace invsched
