#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spreadcpm/pulse.hpp"
#include "test_util.hpp"

using namespace spreadcpm;

TEST_CASE("rectangular pulse is the unit indicator on [-1/2, 1/2)") {
  const auto p = ShapingPulse::rectangular();
  CHECK(p.eval(0.25) == 1.0);
  CHECK(p.eval(0.75) == 0.0);
  CHECK(p.eval(-0.49) == 1.0);
  CHECK(p.eval(0.5) == 0.0);
  CHECK(p.integral(-0.5) == doctest::Approx(0.0));
  CHECK(p.integral(0.0) == doctest::Approx(0.5));
  CHECK(p.integral(2.0) == 1.0);
}

TEST_CASE("gfsk pulse is symmetric") {
  const auto p = ShapingPulse::gfsk(0.3);
  CHECK(p.eval(1.7) == doctest::Approx(p.eval(-1.7)).epsilon(1e-12));
  for (double t : {0.1, 0.35, 0.9, 2.2, 3.7}) {
    CHECK(std::abs(p.eval(t) - p.eval(-t)) < 1e-12);
  }
}

TEST_CASE("pulses are nonnegative with unit integral") {
  for (const auto& p : {ShapingPulse::rectangular(), ShapingPulse::raised_cosine(),
                        ShapingPulse::gfsk(0.3), ShapingPulse::gfsk(0.5)}) {
    for (int i = -200; i <= 200; ++i) {
      CHECK(p.eval(0.025 * i) >= 0.0);
    }
    // Quadrature oracle over [-5, 5] (covers every declared support).
    const double mass = testutil::integrate([&](double t) { return p.eval(t); }, -5.0, 5.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("cumulative integral matches quadrature of the pulse") {
  for (const auto& p : {ShapingPulse::raised_cosine(), ShapingPulse::gfsk(0.3)}) {
    for (double t : {-0.8, -0.3, 0.0, 0.4, 0.77, 1.5, 3.2}) {
      const double oracle =
          testutil::integrate([&](double s) { return p.eval(s); }, -p.support() - 0.5, t);
      CHECK(p.integral(t) == doctest::Approx(oracle).epsilon(1e-8));
    }
  }
}

TEST_CASE("gfsk tail is negligible beyond the declared support") {
  const auto p = ShapingPulse::gfsk(0.3);
  // Evaluate the untruncated erf difference just past the cut.
  const double g = 2.0 * 3.14159265358979323846 * 0.3 / std::sqrt(2.0 * std::log(2.0));
  const double raw = 0.5 * (std::erf(g * 4.51) - std::erf(g * 3.51));
  CHECK(raw < 1e-9);
  CHECK(p.eval(4.01) == 0.0);
}

TEST_CASE("bad BT rejected") {
  CHECK_THROWS_AS(ShapingPulse::gfsk(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ShapingPulse::gfsk(-1.0), std::invalid_argument);
}
