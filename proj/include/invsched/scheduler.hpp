#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace invsched {

/// A transmission schedule: strictly increasing instants starting at 0.
class Schedule {
 public:
  /// Validated: throws MalformedSequence or InfeasibleSchedule.
  static Schedule make(std::vector<std::int64_t> instants, int alpha);
  /// Skips the gap check (structure is still validated). Used to build
  /// deliberately over-long schedules for stress tests.
  static Schedule unchecked(std::vector<std::int64_t> instants, int alpha);

  const std::vector<std::int64_t>& instants() const { return instants_; }
  int alpha() const { return alpha_; }
  /// True when every gap is at most alpha.
  bool certified() const { return certified_; }
  std::size_t size() const { return instants_.size(); }

 private:
  Schedule(std::vector<std::int64_t> instants, int alpha, bool certified)
      : instants_(std::move(instants)), alpha_(alpha), certified_(certified) {}

  std::vector<std::int64_t> instants_;
  int alpha_;
  bool certified_;
};

/// instants[0] == 0 and every gap <= alpha. Throws MalformedSequence when the
/// sequence is empty, negative or not strictly increasing.
bool is_feasible(std::span<const std::int64_t> instants, int alpha);

/// {0, period, 2 period, ...} below horizon; period defaults to alpha.
Schedule periodic_schedule(int alpha, std::int64_t horizon, int period = 0);

/// Fraction of the horizon's steps without a transmission.
double savings(const Schedule& schedule, std::int64_t horizon);

/// A random feasible schedule: gaps drawn uniformly from 1..alpha.
Schedule random_schedule(int alpha, std::int64_t horizon, std::uint64_t seed);

}  // namespace invsched
