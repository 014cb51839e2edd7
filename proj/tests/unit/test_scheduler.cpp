#include <doctest.h>

#include <cmath>
#include <vector>

#include "invsched/errors.hpp"
#include "invsched/scheduler.hpp"

using namespace invsched;
using Instants = std::vector<std::int64_t>;

TEST_SUITE("scheduler") {
  TEST_CASE("published example sequences are feasible for alpha = 3") {
    CHECK(is_feasible(Instants{0, 2, 4, 7, 10}, 3));
    CHECK(is_feasible(Instants{0, 3, 6, 9, 12}, 3));
    CHECK_FALSE(is_feasible(Instants{0, 4, 7}, 3));
    CHECK_FALSE(is_feasible(Instants{1, 2, 3}, 3));
  }

  TEST_CASE("malformed sequences") {
    CHECK_THROWS_AS(is_feasible(Instants{0, 2, 2}, 3), MalformedSequence);
    CHECK_THROWS_AS(is_feasible(Instants{0, 3, 1}, 3), MalformedSequence);
    CHECK_THROWS_AS(is_feasible(Instants{}, 3), MalformedSequence);
    CHECK_THROWS_AS(is_feasible(Instants{-1, 0}, 3), MalformedSequence);
    CHECK_THROWS_AS(Schedule::make({0, 4}, 3), InfeasibleSchedule);
    CHECK_THROWS_AS(Schedule::unchecked({0, 0}, 3), MalformedSequence);
    const Schedule loose = Schedule::unchecked({0, 4}, 3);
    CHECK_FALSE(loose.certified());
    CHECK(Schedule::make({0, 3}, 3).certified());
  }

  TEST_CASE("periodic schedules") {
    CHECK(periodic_schedule(3, 13).instants() == Instants{0, 3, 6, 9, 12});
    CHECK(periodic_schedule(1, 4).instants() == Instants{0, 1, 2, 3});
    CHECK(periodic_schedule(3, 1).instants() == Instants{0});
    CHECK(periodic_schedule(3, 10, 2).instants() == Instants{0, 2, 4, 6, 8});
    CHECK_THROWS_AS(periodic_schedule(3, 10, 4), InfeasibleSchedule);
  }

  TEST_CASE("savings") {
    CHECK(savings(periodic_schedule(3, 300), 300) == doctest::Approx(1.0 - 100.0 / 300.0));
    CHECK(std::abs(savings(periodic_schedule(3, 300), 300) - 0.6667) < 1e-4);
    CHECK(savings(periodic_schedule(1, 50), 50) == 0.0);
    CHECK(savings(Schedule::make({0}, 10), 10) == doctest::Approx(0.9));
    CHECK_THROWS(savings(periodic_schedule(3, 300), 200));
  }
}

TEST_SUITE("scheduler-properties") {
  TEST_CASE("periodic schedules are feasible and approach 1 - 1/alpha") {
    for (int alpha = 1; alpha <= 8; ++alpha) {
      for (std::int64_t T : {1, 2, 7, 100, 10000}) {
        CHECK(is_feasible(periodic_schedule(alpha, T).instants(), alpha));
      }
      const double s = savings(periodic_schedule(alpha, 10000), 10000);
      CHECK(std::abs(s - (1.0 - 1.0 / alpha)) <= alpha / 10000.0);
    }
  }

  TEST_CASE("random schedules are feasible with a short tail") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const int alpha = 1 + static_cast<int>(seed % 5);
      const std::int64_t T = 1 + static_cast<std::int64_t>(seed * 7 % 150);
      const Schedule s = random_schedule(alpha, T, seed);
      CHECK(is_feasible(s.instants(), alpha));
      CHECK(s.instants().back() < T);
      CHECK(T - s.instants().back() <= alpha);
      CHECK(random_schedule(alpha, T, seed).instants() == s.instants());
    }
  }
}
