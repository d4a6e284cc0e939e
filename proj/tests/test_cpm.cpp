#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "spreadcpm/cpm.hpp"
#include "test_util.hpp"

using namespace spreadcpm;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

CpmConfig gfsk_cfg(double h, double bt, int sps) {
  CpmConfig cfg;
  cfg.mod_index = h;
  cfg.pulse = ShapingPulse::gfsk(bt);
  cfg.samples_per_symbol = sps;
  return cfg;
}

CpmConfig rect_cfg(double h, int sps) {
  CpmConfig cfg;
  cfg.mod_index = h;
  cfg.pulse = ShapingPulse::rectangular();
  cfg.samples_per_symbol = sps;
  return cfg;
}

// Independent GFSK pulse for the quadrature oracle (std::erf, no tables).
double oracle_gfsk_pulse(double t, double bt) {
  const double g = kTwoPi * bt / std::sqrt(2.0 * std::log(2.0));
  return 0.5 * (std::erf(g * (t + 0.5)) - std::erf(g * (t - 0.5)));
}

// Brute-force phase of the CPM sum: integrates the pulse numerically for
// every contributing symbol, including the default all-zeros history.
double oracle_phase(const BitSeq& bits, double h, double bt, double support, double t) {
  const auto depth = static_cast<int>(std::ceil(support + 0.5));
  double acc = 0.0;
  for (int k = -depth; k < static_cast<int>(bits.size()); ++k) {
    const double sign = (k >= 0 && bits[static_cast<std::size_t>(k)]) ? 1.0 : -1.0;
    const double center = static_cast<double>(k) + 0.5;
    const double lo = center - support;
    const double hi = std::min(t, center + support);
    if (hi <= lo) continue;
    double q;
    if (t >= center + support) {
      q = 1.0;
    } else {
      q = testutil::integrate([&](double s) { return oracle_gfsk_pulse(s - center, bt); }, lo, hi);
    }
    acc += sign * q;
  }
  return 0.5 * h * acc;
}

double norm2_riemann(const ComplexSignal& s) {
  double acc = 0.0;
  for (const auto& x : s.samples) acc += std::norm(x);
  return acc * s.dt;
}

}  // namespace

TEST_CASE("full-response ramp advances the phase by h/2 per symbol") {
  const double h = 0.7;
  const auto phases = phase_trajectory({1}, rect_cfg(h, 8), {0.0, 1.0});
  CHECK(phases[1] - phases[0] == doctest::Approx(0.5 * h).epsilon(1e-12));
  const auto down = phase_trajectory({0}, rect_cfg(h, 8), {0.0, 1.0});
  CHECK(down[1] - down[0] == doctest::Approx(-0.5 * h).epsilon(1e-12));
}

TEST_CASE("complement sequences have negated trajectories (no shared history)") {
  const auto cfg = gfsk_cfg(0.8, 0.3, 8);
  const BitSeq ones(10, 1);
  const BitSeq zeros(10, 0);
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(0.2 * i);
  const auto up = phase_trajectory(ones, cfg, times, BitSeq{});
  const auto dn = phase_trajectory(zeros, cfg, times, BitSeq{});
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(up[i] == doctest::Approx(-dn[i]).epsilon(1e-12));
  }
}

TEST_CASE("gfsk phase matches the brute-force quadrature of the modulation sum") {
  const double h = 0.5, bt = 0.3;
  const auto cfg = gfsk_cfg(h, bt, 8);
  BitSeq bits;
  for (int i = 0; i < 8; ++i) bits.push_back(static_cast<std::uint8_t>(i % 2 == 0));
  const std::vector<double> times = {0.3, 1.0, 2.7, 4.5, 6.25, 8.0};
  const auto phases = phase_trajectory(bits, cfg, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double oracle = oracle_phase(bits, h, bt, cfg.pulse.support(), times[i]);
    CHECK(phases[i] == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("grid outside the modulated range is rejected") {
  const auto cfg = rect_cfg(0.5, 8);
  CHECK_THROWS_AS(phase_trajectory({1, 0}, cfg, {2.5}), std::out_of_range);
  CHECK_THROWS_AS(phase_trajectory({1, 0}, cfg, {-0.5}), std::out_of_range);
}

TEST_CASE("baseband samples have constant unit modulus") {
  const auto sig = modulate_baseband({1, 0, 1, 1, 0, 0, 1}, gfsk_cfg(0.8, 0.3, 16));
  double worst = 0.0;
  for (const auto& s : sig.samples) worst = std::max(worst, std::abs(std::abs(s) - 1.0));
  CHECK(worst < 1e-12);
}

TEST_CASE("initial phase 1/4 multiplies the waveform by i") {
  const auto cfg = gfsk_cfg(0.5, 0.3, 8);
  const BitSeq bits = {1, 1, 0, 1};
  const auto a = modulate_baseband(bits, cfg, 0.0);
  const auto b = modulate_baseband(bits, cfg, 0.25);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const cplx expect = cplx(0.0, 1.0) * a.samples[i];
    CHECK(std::abs(b.samples[i] - expect) < 1e-12);
  }
}

TEST_CASE("riemann energy is one per symbol") {
  const auto sig = modulate_baseband({1, 0, 1}, gfsk_cfg(0.8, 0.3, 5));
  CHECK(norm2_riemann(sig) == doctest::Approx(3.0).epsilon(2.0 / 5.0));
  // Constant modulus makes the midpoint Riemann sum exact.
  CHECK(norm2_riemann(sig) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("complement pair distance stays within the asymptotic residual bound") {
  // GFSK support is only approximately in [-1,1]; the bound still holds.
  const double h = 0.8;
  const int n = 10;
  const auto cfg = gfsk_cfg(h, 0.3, 32);
  const BitSeq ones(n, 1);
  const BitSeq zeros(n, 0);
  const auto a = modulate_baseband(ones, cfg);
  const auto b = modulate_baseband(zeros, cfg);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) d2 += std::norm(a.samples[i] - b.samples[i]);
  d2 *= a.dt;
  CHECK(std::abs(d2 - 2.0 * n) <= 3.0 * (1.0 + 1.0 / h));
}

TEST_CASE("phase continuity: adjacent samples move by at most h/sps") {
  const auto cfg = gfsk_cfg(1.0, 0.3, 8);
  const auto sig = modulate_baseband({1, 1, 1, 0, 1, 0, 0, 1}, cfg);
  for (std::size_t i = 1; i < sig.samples.size(); ++i) {
    const double jump = std::abs(std::arg(sig.samples[i] * std::conj(sig.samples[i - 1]))) / kTwoPi;
    CHECK(jump <= cfg.mod_index / cfg.samples_per_symbol + 1e-9);
  }
}

TEST_CASE("doubling the oversampling moves norm estimates by O(1/sps)") {
  const BitSeq bits = {1, 0, 0, 1, 1, 0};
  const double lo = norm2_riemann(modulate_baseband(bits, gfsk_cfg(0.8, 0.3, 8)));
  const double hi = norm2_riemann(modulate_baseband(bits, gfsk_cfg(0.8, 0.3, 16)));
  CHECK(std::abs(hi - lo) <= 1.0 / 8.0);
}

TEST_CASE("passband equals sqrt(2) Re(carrier x baseband)") {
  const auto cfg = gfsk_cfg(0.8, 0.3, 64);
  const BitSeq bits = {1, 0, 1, 1};
  const auto bb = modulate_baseband(bits, cfg, 0.1);
  const auto pb = modulate_passband(bits, cfg, 0.1, 8.0);
  for (std::size_t i = 0; i < pb.samples.size(); ++i) {
    const double t = bb.sample_time(i);
    const double expect =
        std::sqrt(2.0) * std::real(std::polar(1.0, kTwoPi * 8.0 * t) * bb.samples[i]);
    CHECK(std::abs(pb.samples[i] - expect) < 1e-12);
  }
}

TEST_CASE("passband norm approaches N as the carrier grows") {
  CpmConfig cfg = gfsk_cfg(0.8, 0.3, 128);
  const BitSeq bits(10, 1);
  auto norm_err = [&](double wc) {
    const auto pb = modulate_passband(bits, cfg, 0.0, wc);
    double acc = 0.0;
    for (double s : pb.samples) acc += s * s;
    return std::abs(acc * pb.dt - 10.0);
  };
  CHECK(norm_err(8.0) <= 0.1);
  CHECK(norm_err(32.0) < norm_err(4.0));
}

TEST_CASE("nyquist violation rejected") {
  const auto cfg = gfsk_cfg(0.8, 0.3, 8);
  CHECK_THROWS_AS(modulate_passband({1, 0}, cfg, 0.0, 4.0), std::invalid_argument);
}

TEST_CASE("config validation") {
  CpmConfig cfg = rect_cfg(0.5, 3);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.samples_per_symbol = 4;
  cfg.mod_index = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
