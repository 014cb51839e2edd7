#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "helpers.hpp"
#include "invsched/errors.hpp"
#include "invsched/system.hpp"

using namespace invsched;
using testing::interval;
using testing::mat;
using testing::vec;

TEST_SUITE("system") {
  TEST_CASE("step of the APS model") {
    const LinearSystem sys = aps_model();
    CHECK(sys.step(vec({0, 0, 0}), vec({0}), vec({0})).isZero(0.0));
    const Eigen::VectorXd x1 = sys.step(vec({1, 0, 0}), vec({0}), vec({0}));
    CHECK(x1[0] == doctest::Approx(2.91).epsilon(1e-12));
    CHECK(x1[1] == 1.0);
    CHECK(x1[2] == 0.0);
    CHECK(sys.step(vec({0, 0, 0}), vec({1}), vec({0})).isApprox(vec({-2, 0, 0})));
    CHECK_THROWS_AS(sys.step(vec({0, 0}), vec({0}), vec({0})), DimensionMismatch);
    CHECK_THROWS_AS(sys.step(vec({0, 0, 0}), vec({0, 1}), vec({0})), DimensionMismatch);
  }

  TEST_CASE("output map") {
    const LinearSystem sys = aps_model();
    CHECK(sys.output(vec({5, 7, 9})) == vec({9}));
    CHECK(sys.output(vec({0, 0, 0})).isZero(0.0));
    CHECK_THROWS_AS(sys.output(vec({1})), DimensionMismatch);

    const LinearSystem full(mat({{0.5, 0}, {0, 0.5}}), mat({{1}, {0}}), mat({{0}, {1}}),
                            Eigen::MatrixXd::Identity(2, 2), HPolytope::box(2, -1, 1),
                            interval(-1, 1), interval(0, 0));
    CHECK(full.output(vec({0.25, -0.75})) == vec({0.25, -0.75}));
  }

  TEST_CASE("APS constants against the closed-form formulas") {
    const oracle::ApsReference ref = oracle::aps_reference();
    const ApsCoefficients c = aps_coefficients();
    CHECK(c.gain == ref.K);
    CHECK(std::abs(c.a1 - ref.a1) <= 1e-12);
    CHECK(std::abs(c.a2 - ref.a2) <= 1e-12);
    CHECK(std::abs(c.a3 - ref.a3) <= 1e-12);
    CHECK(ref.a1 == doctest::Approx(-2.91).epsilon(1e-12));
    CHECK(ref.a2 == doctest::Approx(2.822625).epsilon(1e-12));
    CHECK(ref.a3 == doctest::Approx(-0.9126005).epsilon(1e-9));

    const LinearSystem sys = aps_model();
    CHECK(sys.A().row(0).isApprox(vec({-ref.a1, -ref.a2, -ref.a3}).transpose(), 1e-12));
    CHECK(sys.A().row(1) == vec({1, 0, 0}).transpose());
    CHECK(sys.A().row(2) == vec({0, 1, 1}).transpose());
    CHECK(sys.B() == mat({{-2}, {0}, {0}}));
    CHECK(sys.E() == mat({{0}, {0}, {1}}));
    CHECK(sys.C() == mat({{0, 0, 1}}));
    CHECK(aps_model(ApsVariant::Companion).A().row(2) == vec({0, 1, 0}).transpose());
  }

  TEST_CASE("APS constraint sets") {
    const LinearSystem sys = aps_model();
    CHECK(equals(sys.W(), interval(0, 10)));
    CHECK(equals(sys.U(), interval(-10, 100)));
    CHECK(equals(sys.X(), HPolytope::box(3, -30, 30)));
    CHECK(sys.sample_minutes() == 5.0);
  }

  TEST_CASE("construction rejects inconsistent or degenerate data") {
    const auto X = interval(-1, 1);
    const auto one = mat({{1}});
    CHECK_THROWS_AS(LinearSystem(mat({{1, 0}}), one, one, one, X, X, X), DimensionMismatch);
    CHECK_THROWS_AS(LinearSystem(one, one, one, one, HPolytope::box(2, -1, 1), X, X),
                    DimensionMismatch);
    CHECK_THROWS_WITH_AS(LinearSystem(one, one, one, one, HPolytope::empty(1), X, X),
                         doctest::Contains("X is empty"), InvalidSystem);
    const HPolytope ray(mat({{1}}), vec({1}));
    CHECK_THROWS_WITH_AS(LinearSystem(one, one, one, one, X, X, ray),
                         doctest::Contains("W"), InvalidSystem);
  }

  TEST_CASE("step is affine-linear") {
    const LinearSystem sys = aps_model();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(-30, 30);
    for (int k = 0; k < 200; ++k) {
      const Eigen::VectorXd x1 = vec({d(rng), d(rng), d(rng)});
      const Eigen::VectorXd x2 = vec({d(rng), d(rng), d(rng)});
      const Eigen::VectorXd u1 = vec({d(rng)}), u2 = vec({d(rng)});
      const Eigen::VectorXd w1 = vec({d(rng)}), w2 = vec({d(rng)});
      const Eigen::VectorXd lhs = sys.step(x1 + x2, u1 + u2, w1 + w2);
      const Eigen::VectorXd rhs =
          sys.step(x1, u1, w1) + sys.step(x2, u2, w2) - sys.step(vec({0, 0, 0}), vec({0}), vec({0}));
      CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
  }
}
