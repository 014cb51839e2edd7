#include "invsched/simulator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "invsched/errors.hpp"
#include "invsched/lp.hpp"
#include "invsched/safetime.hpp"

namespace invsched {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Constraints on u_hat with x0 fixed: rows of the tightened stack for x_1..x_j
// (state part) and the input rows, as  A_state u <= b_state,  A_input u <= b_input.
struct FixedStartConstraints {
  MatrixXd A_state;
  VectorXd b_state;
  MatrixXd A_input;
  VectorXd b_input;
};

FixedStartConstraints fixed_start(const LinearSystem& sys, const HPolytope& c_inf,
                                  const VectorXd& x0, int horizon) {
  const HPolytope tightened = tighten(build_stacked(sys, c_inf, horizon), sys.W());
  const int n = sys.state_dim();
  const int k = horizon * sys.input_dim();
  const int rc = c_inf.rows();
  const int state_rows = horizon * rc;
  const int input_rows = horizon * sys.U().rows();
  if (tightened.rows() != rc + state_rows + input_rows) {
    throw Infeasible("disturbance tightening leaves no admissible input sequence");
  }
  const MatrixXd& H = tightened.H();
  const VectorXd& h = tightened.h();
  FixedStartConstraints out;
  // Block t = 0 only constrains x0 itself and is checked by the caller.
  out.A_state = H.block(rc, n, state_rows, k);
  out.b_state = h.segment(rc, state_rows) - H.block(rc, 0, state_rows, n) * x0;
  out.A_input = H.block(rc + state_rows, n, input_rows, k);
  out.b_input = h.segment(rc + state_rows, input_rows);
  return out;
}

std::vector<VectorXd> split_inputs(const VectorXd& stacked, int horizon, int input_dim) {
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) out.push_back(stacked.segment(t * input_dim, input_dim));
  return out;
}

void check_start(const LinearSystem& sys, const HPolytope& c_inf, const VectorXd& x0,
                 int horizon) {
  if (horizon < 1) throw std::invalid_argument("planning horizon must be positive");
  if (x0.size() != sys.state_dim()) throw DimensionMismatch("initial state has wrong length");
  if (c_inf.dim() != sys.state_dim()) throw DimensionMismatch("safe set has wrong dimension");
  if (!contains(c_inf, x0)) throw Infeasible("initial state lies outside the safe set");
}

// Inputs minimising the worst-case violation of the state rows. Used when no
// robustly feasible sequence exists over an uncertified gap.
std::vector<VectorXd> least_violating_inputs(const LinearSystem& sys, const HPolytope& c_inf,
                                             const VectorXd& x0, int horizon) {
  const FixedStartConstraints c = fixed_start(sys, c_inf, x0, horizon);
  const Index k = c.A_state.cols();
  const Index rs = c.A_state.rows();
  const Index ri = c.A_input.rows();
  MatrixXd A = MatrixXd::Zero(rs + ri, k + 1);
  A.topLeftCorner(rs, k) = c.A_state;
  A.topRightCorner(rs, 1).setConstant(-1.0);
  A.bottomLeftCorner(ri, k) = c.A_input;
  VectorXd b(rs + ri);
  b << c.b_state, c.b_input;
  const lp::Solution sol = lp::solve(lp::Problem{-VectorXd::Unit(k + 1, k), A, b});
  if (!sol.optimal()) {
    throw Infeasible(std::string("least-violation plan LP was ") + lp::to_string(sol.status));
  }
  return split_inputs(sol.point.head(k), horizon, sys.input_dim());
}

}  // namespace

DisturbanceGenerator::DisturbanceGenerator(Kind kind) : kind_(std::move(kind)) {}

DisturbanceGenerator DisturbanceGenerator::meal_pulses(std::vector<std::int64_t> times,
                                                       std::vector<VectorXd> magnitudes) {
  if (times.size() != magnitudes.size()) {
    throw std::invalid_argument("meal pulses need one magnitude per time");
  }
  return DisturbanceGenerator(MealPulses{std::move(times), std::move(magnitudes)});
}

const char* DisturbanceGenerator::name() const {
  return std::visit(Overloaded{[](const Zero&) { return "zero"; },
                               [](const UniformRandom&) { return "uniform"; },
                               [](const VertexWorstCase&) { return "worst"; },
                               [](const MealPulses&) { return "meals"; }},
                    kind_);
}

void DisturbanceGenerator::bind(const HPolytope& W) {
  const int m = W.dim();
  lo_.resize(m);
  hi_.resize(m);
  for (int i = 0; i < m; ++i) {
    const VectorXd e = VectorXd::Unit(m, i);
    hi_[i] = support(W, e);
    lo_[i] = -support(W, -e);
  }
  const VectorXd origin = VectorXd::Zero(m);
  std::visit(Overloaded{[&](const Zero&) {
                          if (!contains(W, origin)) {
                            throw std::invalid_argument("zero disturbance lies outside W");
                          }
                        },
                        [&](const UniformRandom& u) { rng_.seed(u.seed); },
                        [](const VertexWorstCase&) {},
                        [&](const MealPulses& meals) {
                          for (std::size_t k = 0; k < meals.times.size(); ++k) {
                            if (meals.magnitudes[k].size() != m) {
                              throw DimensionMismatch("meal magnitude has wrong length");
                            }
                            if (!contains(W, meals.magnitudes[k])) {
                              throw std::invalid_argument("meal magnitude at t = " +
                                                          std::to_string(meals.times[k]) +
                                                          " lies outside W");
                            }
                          }
                          if (!contains(W, origin)) {
                            throw std::invalid_argument(
                                "meal pulses need the zero disturbance to lie in W");
                          }
                        }},
             kind_);
}

VectorXd DisturbanceGenerator::next(const DisturbanceContext& ctx) {
  const HPolytope& W = ctx.sys.W();
  return std::visit(
      Overloaded{
          [&](const Zero&) -> VectorXd { return VectorXd::Zero(W.dim()); },
          [&](const UniformRandom&) -> VectorXd {
            VectorXd w(W.dim());
            for (int attempt = 0; attempt < 10000; ++attempt) {
              for (Index i = 0; i < w.size(); ++i) {
                w[i] = std::uniform_real_distribution<double>(lo_[i], hi_[i])(rng_);
              }
              if (contains(W, w, 0.0)) return w;
            }
            throw NumericalFailure("rejection sampling of W did not succeed");
          },
          [&](const VertexWorstCase&) -> VectorXd {
            const HPolytope& S = ctx.safe_set;
            const VectorXd nominal = ctx.sys.A() * ctx.state + ctx.sys.B() * ctx.input;
            double worst = -std::numeric_limits<double>::infinity();
            VectorXd choice = support_point(W, VectorXd::Zero(W.dim())).point;
            for (int i = 0; i < S.rows(); ++i) {
              const double norm = S.H().row(i).norm();
              if (norm == 0.0) continue;
              const VectorXd direction = ctx.sys.E().transpose() * S.H().row(i).transpose();
              const SupportPoint best = support_point(W, direction);
              const double margin = (S.H().row(i).dot(nominal) - S.h()[i] + best.value) / norm;
              if (margin > worst) {
                worst = margin;
                choice = best.point;
              }
            }
            return choice;
          },
          [&](const MealPulses& meals) -> VectorXd {
            for (std::size_t k = 0; k < meals.times.size(); ++k) {
              if (meals.times[k] == ctx.t) return meals.magnitudes[k];
            }
            return VectorXd::Zero(W.dim());
          }},
      kind_);
}

std::vector<VectorXd> plan_inputs(const LinearSystem& sys, const HPolytope& c_inf,
                                  const VectorXd& x0, int horizon) {
  check_start(sys, c_inf, x0, horizon);
  const FixedStartConstraints c = fixed_start(sys, c_inf, x0, horizon);

  // min sum |u|  via  u - s <= 0, -u - s <= 0 over (u, s).
  const Index k = c.A_state.cols();
  const Index rs = c.A_state.rows();
  const Index ri = c.A_input.rows();
  MatrixXd A = MatrixXd::Zero(rs + ri + 2 * k, 2 * k);
  A.topLeftCorner(rs, k) = c.A_state;
  A.block(rs, 0, ri, k) = c.A_input;
  const MatrixXd I = MatrixXd::Identity(k, k);
  A.block(rs + ri, 0, k, k) = I;
  A.block(rs + ri, k, k, k) = -I;
  A.block(rs + ri + k, 0, k, k) = -I;
  A.block(rs + ri + k, k, k, k) = -I;
  VectorXd b = VectorXd::Zero(rs + ri + 2 * k);
  b.head(rs) = c.b_state;
  b.segment(rs, ri) = c.b_input;
  VectorXd objective = VectorXd::Zero(2 * k);
  objective.tail(k).setConstant(-1.0);

  const lp::Solution sol = lp::solve(lp::Problem{objective, A, b});
  if (!sol.optimal()) {
    throw Infeasible("no admissible " + std::to_string(horizon) +
                     "-step input sequence keeps the state in the safe set");
  }
  return split_inputs(sol.point.head(k), horizon, sys.input_dim());
}

Trajectory run(const LinearSystem& sys, const HPolytope& c_inf, const Schedule& schedule,
               DisturbanceGenerator generator, std::int64_t horizon, const VectorXd& x0) {
  if (horizon < 1) throw std::invalid_argument("simulation horizon must be positive");
  const auto& instants = schedule.instants();
  if (instants.front() != 0) throw InfeasibleSchedule("schedule must transmit at t = 0");
  if (instants.back() >= horizon) {
    throw std::invalid_argument("schedule has instants at or beyond the horizon");
  }
  if (schedule.certified() && horizon - instants.back() > schedule.alpha()) {
    throw InfeasibleSchedule("the last transmission leaves more than alpha steps to the horizon");
  }
  check_start(sys, c_inf, x0, 1);
  generator.bind(sys.W());

  Trajectory traj;
  const auto T = static_cast<std::size_t>(horizon);
  traj.states.reserve(T + 1);
  traj.outputs.reserve(T + 1);
  traj.inputs.reserve(T);
  traj.disturbances.reserve(T);
  traj.transmitted.assign(T, false);
  traj.states.push_back(x0);
  traj.outputs.push_back(sys.output(x0));

  for (std::size_t k = 0; k < instants.size(); ++k) {
    const std::int64_t start = instants[k];
    const std::int64_t end = k + 1 < instants.size() ? instants[k + 1] : horizon;
    const int gap = static_cast<int>(end - start);
    traj.transmitted[static_cast<std::size_t>(start)] = true;

    const VectorXd x_start = traj.states.back();
    std::vector<VectorXd> plan;
    try {
      plan = plan_inputs(sys, c_inf, x_start, gap);
    } catch (const Infeasible&) {
      if (gap <= schedule.alpha()) throw;
      plan = least_violating_inputs(sys, c_inf, x_start, gap);
    }

    for (int s = 0; s < gap; ++s) {
      const std::int64_t t = start + s;
      const VectorXd& x = traj.states.back();
      const VectorXd& u = plan[static_cast<std::size_t>(s)];
      VectorXd w = generator.next(DisturbanceContext{t, sys, c_inf, x, u});
      VectorXd x_next = sys.step(x, u, w);
      traj.inputs.push_back(u);
      traj.disturbances.push_back(std::move(w));
      traj.outputs.push_back(sys.output(x_next));
      traj.states.push_back(x_next);
      if (!contains(c_inf, x_next)) {
        throw SafetyViolation(static_cast<long>(t + 1), x_next,
                              "state left the safe set at t = " + std::to_string(t + 1));
      }
    }
  }
  return traj;
}

}  // namespace invsched
