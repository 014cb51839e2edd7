#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "invsched/polytope.hpp"
#include "invsched/scheduler.hpp"
#include "invsched/system.hpp"

namespace invsched {

struct Trajectory {
  std::vector<Eigen::VectorXd> states;        // x_0 .. x_T
  std::vector<Eigen::VectorXd> outputs;       // y_0 .. y_T
  std::vector<Eigen::VectorXd> inputs;        // u_0 .. u_{T-1}
  std::vector<Eigen::VectorXd> disturbances;  // w_0 .. w_{T-1}
  std::vector<bool> transmitted;              // length T

  std::size_t horizon() const { return inputs.size(); }
};

/// What the disturbance source sees when choosing w_t.
struct DisturbanceContext {
  std::int64_t t;
  const LinearSystem& sys;
  const HPolytope& safe_set;
  const Eigen::VectorXd& state;
  const Eigen::VectorXd& input;
};

/**
 * Source of w_t. Every kind produces values in W; meal pulses outside W are
 * rejected when the generator is bound to a system rather than clamped.
 */
class DisturbanceGenerator {
 public:
  struct Zero {};
  struct UniformRandom {
    std::uint64_t seed;
  };
  /// Greedy adversary: the W vertex that pushes the next state furthest
  /// towards (or past) the worst constraint of the safe set.
  struct VertexWorstCase {};
  struct MealPulses {
    std::vector<std::int64_t> times;
    std::vector<Eigen::VectorXd> magnitudes;
  };
  using Kind = std::variant<Zero, UniformRandom, VertexWorstCase, MealPulses>;

  static DisturbanceGenerator zero() { return DisturbanceGenerator(Zero{}); }
  static DisturbanceGenerator uniform(std::uint64_t seed) {
    return DisturbanceGenerator(UniformRandom{seed});
  }
  static DisturbanceGenerator worst_case() { return DisturbanceGenerator(VertexWorstCase{}); }
  static DisturbanceGenerator meal_pulses(std::vector<std::int64_t> times,
                                          std::vector<Eigen::VectorXd> magnitudes);

  explicit DisturbanceGenerator(Kind kind);

  const Kind& kind() const { return kind_; }
  const char* name() const;

  /// Checks the generator against W and resets its random state.
  void bind(const HPolytope& W);
  Eigen::VectorXd next(const DisturbanceContext& context);

 private:
  Kind kind_;
  std::mt19937_64 rng_;
  Eigen::VectorXd lo_, hi_;  // bounding box of W
};

/**
 * Input sequence u_0 .. u_{j-1} that keeps x_1 .. x_j in c_inf for every
 * disturbance sequence, starting from x0. Among feasible sequences the one
 * with the least total absolute input is returned.
 *
 * Throws Infeasible when x0 is outside c_inf or no such sequence exists.
 */
std::vector<Eigen::VectorXd> plan_inputs(const LinearSystem& sys, const HPolytope& c_inf,
                                         const Eigen::VectorXd& x0, int horizon);

/**
 * Closed-loop self-triggered run. At each transmission instant the true state
 * is read, inputs are planned up to the next transmission (or the end of the
 * horizon) and replayed open loop. Throws SafetyViolation as soon as a state
 * leaves c_inf.
 *
 * Gaps longer than the schedule's alpha are only accepted for uncertified
 * schedules; those segments fall back to the plan minimising the worst-case
 * constraint violation.
 */
Trajectory run(const LinearSystem& sys, const HPolytope& c_inf, const Schedule& schedule,
               DisturbanceGenerator generator, std::int64_t horizon, const Eigen::VectorXd& x0);

}  // namespace invsched
