#include "invsched/scheduler.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "invsched/errors.hpp"

namespace invsched {

namespace {

void check_structure(std::span<const std::int64_t> instants) {
  if (instants.empty()) throw MalformedSequence("transmission sequence is empty");
  if (instants.front() < 0) throw MalformedSequence("transmission instants must be nonnegative");
  for (std::size_t k = 1; k < instants.size(); ++k) {
    if (instants[k] <= instants[k - 1]) {
      throw MalformedSequence("transmission instants must be strictly increasing (position " +
                              std::to_string(k) + ")");
    }
  }
}

void check_alpha(int alpha) {
  if (alpha < 1) throw std::invalid_argument("alpha must be positive");
}

}  // namespace

bool is_feasible(std::span<const std::int64_t> instants, int alpha) {
  check_alpha(alpha);
  check_structure(instants);
  if (instants.front() != 0) return false;
  for (std::size_t k = 1; k < instants.size(); ++k) {
    if (instants[k] - instants[k - 1] > alpha) return false;
  }
  return true;
}

Schedule Schedule::make(std::vector<std::int64_t> instants, int alpha) {
  if (!is_feasible(instants, alpha)) {
    throw InfeasibleSchedule("schedule must start at 0 with gaps of at most " +
                             std::to_string(alpha) + " steps");
  }
  return Schedule(std::move(instants), alpha, true);
}

Schedule Schedule::unchecked(std::vector<std::int64_t> instants, int alpha) {
  check_alpha(alpha);
  check_structure(instants);
  const bool certified = is_feasible(instants, alpha);
  return Schedule(std::move(instants), alpha, certified);
}

Schedule periodic_schedule(int alpha, std::int64_t horizon, int period) {
  check_alpha(alpha);
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (period == 0) period = alpha;
  if (period < 1) throw std::invalid_argument("period must be positive");
  std::vector<std::int64_t> instants;
  for (std::int64_t t = 0; t < horizon; t += period) instants.push_back(t);
  return Schedule::make(std::move(instants), alpha);
}

double savings(const Schedule& schedule, std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (schedule.instants().back() >= horizon) {
    throw std::invalid_argument("schedule has instants at or beyond the horizon");
  }
  return 1.0 - static_cast<double>(schedule.size()) / static_cast<double>(horizon);
}

Schedule random_schedule(int alpha, std::int64_t horizon, std::uint64_t seed) {
  check_alpha(alpha);
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> gap(1, alpha);
  std::vector<std::int64_t> instants{0};
  while (true) {
    const std::int64_t t = instants.back() + gap(rng);
    if (t >= horizon) break;
    instants.push_back(t);
  }
  return Schedule::make(std::move(instants), alpha);
}

}  // namespace invsched
