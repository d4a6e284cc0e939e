#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spreadcpm/psd.hpp"
#include "spreadcpm/rng.hpp"

using namespace spreadcpm;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("fft matches a naive DFT") {
  RngStream rng(11);
  std::vector<cplx> x(16);
  for (auto& v : x) v = cplx(rng.gaussian(), rng.gaussian());
  auto data = x;
  fft_radix2(data);
  for (std::size_t k = 0; k < x.size(); ++k) {
    cplx ref(0.0, 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
      ref += x[n] * std::polar(1.0, -kTwoPi * static_cast<double>(k * n) / x.size());
    }
    CHECK(std::abs(data[k] - ref) < 1e-10);
  }
  std::vector<cplx> bad(12);
  CHECK_THROWS_AS(fft_radix2(bad), std::invalid_argument);
}

TEST_CASE("a pure tone peaks at its frequency") {
  ComplexSignal sig;
  sig.dt = 0.125;
  const double f0 = 1.5;
  sig.samples.resize(512);
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    sig.samples[i] = std::polar(1.0, kTwoPi * f0 * sig.sample_time(i));
  }
  const auto psd = estimate_psd(sig, 4);
  std::size_t best = 0;
  for (std::size_t i = 1; i < psd.power.size(); ++i) {
    if (psd.power[i] > psd.power[best]) best = i;
  }
  CHECK(std::abs(psd.freq[best] - f0) <= psd.df);
  CHECK(psd.power_db[best] == 0.0);  // max-normalized
}

TEST_CASE("frequency grid is symmetric about zero") {
  ComplexSignal sig;
  sig.dt = 0.25;
  sig.samples.assign(200, cplx(1.0, 0.0));
  const auto psd = estimate_psd(sig, 3);
  CHECK(psd.freq.size() % 2 == 1);
  const std::size_t mid = psd.freq.size() / 2;
  CHECK(psd.freq[mid] == 0.0);
  for (std::size_t i = 0; i < mid; ++i) {
    CHECK(psd.freq[i] == doctest::Approx(-psd.freq[psd.freq.size() - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("integrated power matches the time-domain mean square") {
  RngStream rng(5);
  ComplexSignal sig;
  sig.dt = 0.2;
  sig.samples.resize(1000);
  double msq = 0.0;
  for (auto& v : sig.samples) {
    v = cplx(rng.gaussian(), 0.4 * rng.gaussian());
    msq += std::norm(v);
  }
  msq /= static_cast<double>(sig.samples.size());
  const auto psd = estimate_psd(sig, 6);
  double total = 0.0;
  for (double p : psd.power) total += p * psd.df;
  CHECK(total == doctest::Approx(msq).epsilon(0.02));
}

TEST_CASE("input guards") {
  ComplexSignal sig;
  sig.dt = 0.1;
  sig.samples.assign(32, cplx(1.0, 0.0));
  CHECK_THROWS_AS(estimate_psd(sig, 4), std::invalid_argument);
  sig.samples.assign(128, cplx(1.0, 0.0));
  CHECK_THROWS_AS(estimate_psd(sig, 0), std::invalid_argument);
}
