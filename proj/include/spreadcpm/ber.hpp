#pragma once

#include <cmath>
#include <cstdint>

namespace spreadcpm {

// Monte Carlo bit-error-rate estimate with its binomial standard error.
struct BerEstimate {
  long trials = 0;
  long bits = 0;
  long bit_errors = 0;
  double ber = 0.0;
  double std_err = 0.0;
  std::uint64_t seed = 0;

  static BerEstimate from_counts(long trials, long bits, long errors, std::uint64_t seed) {
    BerEstimate est;
    est.trials = trials;
    est.bits = bits;
    est.bit_errors = errors;
    est.seed = seed;
    est.ber = bits > 0 ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
    est.std_err = bits > 0 ? std::sqrt(est.ber * (1.0 - est.ber) / static_cast<double>(bits)) : 0.0;
    return est;
  }
};

}  // namespace spreadcpm
