#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spreadcpm/analytics.hpp"
#include "spreadcpm/classify.hpp"

using namespace spreadcpm;

namespace {

CpmConfig make_cfg(ShapingPulse pulse, double h, int sps) {
  CpmConfig cfg;
  cfg.pulse = pulse;
  cfg.mod_index = h;
  cfg.samples_per_symbol = sps;
  return cfg;
}

}  // namespace

TEST_CASE("coherent error probability") {
  CHECK(p_coherent(0.0, 1.0) == 0.5);
  // d = 2 sqrt(2) sigma gives 1/2 - 1/2 erf(1).
  CHECK(p_coherent(2.0 * std::sqrt(2.0) * 0.7, 0.7) ==
        doctest::Approx(0.07864960352514255).epsilon(1e-12));
  double prev = 0.6;
  for (double d = 0.0; d < 8.0; d += 0.25) {
    const double p = p_coherent(d, 1.3);
    CHECK(p < prev);
    prev = p;
  }
  CHECK_THROWS_AS(p_coherent(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(p_coherent(1.0, 0.0), std::domain_error);
}

TEST_CASE("noncoherent error probability") {
  CHECK(p_noncoherent(0.0, 0.0, 1.0) == 0.5);
  // |R| = 0, d^2 = 2N, sigma = 1, N = 16 -> exp(-4)/2.
  CHECK(p_noncoherent(std::sqrt(32.0), 0.0, 1.0) ==
        doctest::Approx(0.00915781944436709).epsilon(1e-12));
  // Correlated candidates always do worse.
  for (double d : {2.0, 4.0, 6.0}) {
    CHECK(p_noncoherent(d, 0.3, 1.0) >= p_noncoherent(d, 0.0, 1.0));
  }
  // Series converges to the closed form as |R| -> 0.
  CHECK(std::abs(p_noncoherent(4.0, 1e-7, 1.0) - p_noncoherent(4.0, 0.0, 1.0)) < 1e-10);
  CHECK_THROWS_AS(p_noncoherent(1.0, 1.5, 1.0), std::domain_error);
}

TEST_CASE("erf bounds") {
  const auto at0 = erf_bounds_check(0.0);
  CHECK(at0.erf == 0.0);
  CHECK(at0.linear_bound == 0.0);
  CHECK(!at0.tail_approx.has_value());

  const auto at3 = erf_bounds_check(3.0);
  CHECK(std::abs(at3.erf - *at3.tail_approx) <= 1e-4);

  for (double x = 0.05; x <= 10.0; x += 0.173) {
    const auto b = erf_bounds_check(x);
    CHECK(b.erf <= b.linear_bound + 1e-15);
  }
  CHECK_THROWS_AS(erf_bounds_check(-0.1), std::domain_error);
}

TEST_CASE("joint demodulation asymptotics") {
  // e0 = 0 collapses to exp(-n/(4 sigma^2))/2 exactly.
  CHECK(bounds_joint(12, 1.0, 0.0).p_nc == doctest::Approx(0.5 * std::exp(-3.0)).epsilon(1e-15));
  const auto b16 = bounds_joint(16, 1.0, 0.0);
  CHECK(b16.p_c == doctest::Approx(0.0025833731692615066).epsilon(1e-12));
  // The nc/c ratio grows like sqrt(n).
  const auto b64 = bounds_joint(64, 1.0, 0.0);
  const double r16 = b16.p_nc / b16.p_c;
  const double r64 = b64.p_nc / b64.p_c;
  CHECK(r64 / r16 == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("separate demodulation lower bounds") {
  const auto b9 = bounds_separate(9);
  CHECK(b9.p_c_lower == doctest::Approx(0.14010660914853726).epsilon(1e-12));
  CHECK(b9.p_nc_lower == doctest::Approx(0.22201366069067963).epsilon(1e-12));
  // The noncoherent floor dominates from n = 5 on; at n in {1, 3} the two
  // asymptotic expressions are still crossed (their ratio passes 1 between
  // n = 3 and n = 5).
  for (int n = 5; n <= 101; n += 2) {
    const auto b = bounds_separate(n);
    CHECK(b.p_nc_lower > b.p_c_lower);
  }
  CHECK(bounds_separate(3).p_nc_lower < bounds_separate(3).p_c_lower);
  CHECK_THROWS_AS(bounds_separate(8), std::domain_error);
}

TEST_CASE("joint bounds drop below separate lower bounds past a crossover") {
  // sigma = C = sqrt(2) (orthogonal FSK at Es/N0 = -6 dB): the joint decay
  // beats the separate floor everywhere on the odd grid.
  const double c2 = 2.0;
  int crossover = -1;
  for (int n = 1; n <= 25; n += 2) {
    const auto jb = bounds_joint(n, c2, 0.0);
    const auto sb = bounds_separate(n);
    const bool below = jb.p_nc < sb.p_nc_lower && jb.p_c < sb.p_c_lower;
    if (below && crossover < 0) crossover = n;
    if (crossover > 0) CHECK(below);
  }
  CHECK(crossover == 1);
  // At sigma = 2C the crossover moves past this grid; the ordering claim is
  // then about the Monte Carlo BERs (exercised in the experiment suite).
  const auto jb25 = bounds_joint(25, 8.0, 0.0);
  CHECK(jb25.p_nc > bounds_separate(25).p_nc_lower);
}

TEST_CASE("es/n0 and sigma conversions") {
  CHECK(sigma_to_esn0(std::sqrt(2.0), std::sqrt(2.0)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(esn0_to_sigma(1.0, std::sqrt(2.0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (double es : {0.1, 0.5, 2.0, 10.0}) {
    const double sigma = esn0_to_sigma(es, 1.7);
    CHECK(sigma_to_esn0(sigma, 1.7) == doctest::Approx(es).epsilon(1e-12));
  }
  // Scaling c and sigma together leaves the ratio fixed.
  CHECK(sigma_to_esn0(2.0 * 0.9, 2.0 * 1.4) ==
        doctest::Approx(sigma_to_esn0(0.9, 1.4)).epsilon(1e-12));
  CHECK_THROWS_AS(esn0_to_sigma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(esn0_to_sigma(1.0, -1.0), std::domain_error);
}

TEST_CASE("repetition residuals respect the asymptotic bound for [-1,1] pulses") {
  for (double h : {0.5, 0.8, 1.0}) {
    const auto cfg = make_cfg(ShapingPulse::raised_cosine(), h, 16);
    for (int n = 4; n <= 14; ++n) {
      const auto rep = distance_scan_one(cfg, n, ScanMode::Repetition);
      CHECK(std::abs(rep.mean_residual) <= 3.0 * (1.0 + 1.0 / h));
    }
  }
}

TEST_CASE("exhaustive gfsk mean distance approaches sqrt(2N)") {
  const auto cfg = make_cfg(ShapingPulse::gfsk(0.3), 0.8, 16);
  const auto rep = distance_scan_one(cfg, 10, ScanMode::AllSequences);
  CHECK(rep.mean_distance == doctest::Approx(std::sqrt(20.0)).epsilon(0.05));
  CHECK(rep.min_distance <= rep.mean_distance);
  CHECK(rep.mean_distance <= rep.max_distance);
}

TEST_CASE("n=1 scan distance equals the single-symbol separation") {
  for (const auto& pulse : {ShapingPulse::rectangular(), ShapingPulse::gfsk(0.3)}) {
    const auto cfg = make_cfg(pulse, 0.8, 32);
    const auto rep = distance_scan_one(cfg, 1, ScanMode::Repetition);
    CHECK(rep.mean_distance == doctest::Approx(single_symbol_distance(cfg)).epsilon(1e-12));

    // Cross-check against the waveform route through inner products.
    const auto z0 = modulate_baseband({0}, cfg);
    const auto z1 = modulate_baseband({1}, cfg);
    const ObservationWindow w{0.0, 1.0};
    const double d2 = norm2(z0, w) + norm2(z1, w) - 2.0 * std::real(inner_product(z0, z1, w));
    CHECK(rep.mean_distance == doctest::Approx(std::sqrt(d2)).epsilon(1e-9));
  }
}

TEST_CASE("binary orthogonal FSK has C = sqrt(2)") {
  const auto cfg = make_cfg(ShapingPulse::rectangular(), 1.0, 32);
  CHECK(single_symbol_distance(cfg) == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("scan guards") {
  const auto cfg = make_cfg(ShapingPulse::gfsk(0.3), 0.8, 8);
  CHECK_THROWS_AS(distance_scan_one(cfg, 15, ScanMode::AllSequences), std::invalid_argument);
  CHECK_THROWS_AS(distance_scan_one(cfg, 0, ScanMode::Repetition), std::invalid_argument);
  const auto rep = distance_scan_one(cfg, 6, ScanMode::AllSequences, true);
  CHECK(rep.distances.size() == 64);
}

TEST_CASE("scan results are independent of the thread count") {
  const auto cfg = make_cfg(ShapingPulse::gfsk(0.3), 0.8, 8);
  const auto a = distance_scan_one(cfg, 9, ScanMode::AllSequences, true, 1);
  const auto b = distance_scan_one(cfg, 9, ScanMode::AllSequences, true, 4);
  CHECK(a.mean_distance == b.mean_distance);
  CHECK(a.mean_residual == b.mean_residual);
  for (std::size_t i = 0; i < a.distances.size(); ++i) {
    CHECK(a.distances[i] == b.distances[i]);
  }
}
