#pragma once

#include <cstdint>
#include <cmath>

namespace spreadcpm {

// Counter-seeded PRNG streams. Every random quantity in an experiment is
// drawn from a stream derived as (master_seed, point, trial, purpose), so
// results are independent of thread schedule and identical across reruns.
//
// The generator is xorshift64*, written out so codebooks and noise are
// bit-reproducible in any implementation:
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  return x * 0x2545F4914F6CDD1D
//
// Seeding/stream separation uses the splitmix64 finalizer.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Purpose tags keep the per-trial streams for noise, phase, data, etc.
// disjoint even though they share (master, point, trial).
enum class StreamPurpose : std::uint64_t {
  Noise = 1,
  Phase = 2,
  Message = 3,
  TieBreak = 4,
  NbiSymbols = 5,
  NbiFreq = 6,
  Codebook = 7,
  Generic = 8,
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                 std::uint64_t trial, StreamPurpose purpose) {
  std::uint64_t s = master;
  s ^= splitmix64(s) ^ (point + 0x9E3779B97F4A7C15ULL);
  s ^= splitmix64(s) ^ (trial + 0xD1B54A32D192ED03ULL);
  s ^= splitmix64(s) ^ (static_cast<std::uint64_t>(purpose) + 0x8CB92BA72F3D8DD7ULL);
  return splitmix64(s);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    // xorshift64* must not start at zero; run the seed through splitmix64
    // until nonzero (zero seed maps to a fixed nonzero state).
    std::uint64_t s = seed;
    state_ = splitmix64(s);
    while (state_ == 0) state_ = splitmix64(s);
  }

  RngStream(std::uint64_t master, std::uint64_t point, std::uint64_t trial,
            StreamPurpose purpose)
      : RngStream(derive_seed(master, point, trial, purpose)) {}

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool bernoulli(double p = 0.5) { return uniform() < p; }

  int bit() { return static_cast<int>(next_u64() >> 63); }

  std::uint32_t below(std::uint32_t n) {
    // Unbiased enough for tie-breaking; n is tiny in practice.
    return static_cast<std::uint32_t>(next_u64() % n);
  }

  // Standard normal via Box-Muller, explicit so every platform draws the
  // same sequence from the same stream.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_ = 0x9E3779B97F4A7C15ULL;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spreadcpm
