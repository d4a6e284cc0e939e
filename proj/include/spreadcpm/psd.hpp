#pragma once

#include <vector>

#include "spreadcpm/signal.hpp"

namespace spreadcpm {

struct PsdEstimate {
  std::vector<double> freq;       // cycles/symbol, symmetric about 0
  std::vector<double> power_db;   // max-normalized dB
  std::vector<double> power;      // linear density (per cycles/symbol)
  int tapers = 0;
  double df = 0.0;
  std::size_t fft_size = 0;
};

// Multitaper spectral estimate with orthonormal sine tapers
//   w_k(n) = sqrt(2/(L+1)) sin(pi (k+1) (n+1) / (L+1)).
// The linear density integrates to the time-domain mean square.
// Requires at least 64 samples and one taper.
PsdEstimate estimate_psd(const ComplexSignal& sig, int tapers);

// In-place radix-2 FFT (size must be a power of two); inverse = conjugate
// trick is up to the caller. Exposed for tests.
void fft_radix2(std::vector<cplx>& data);

}  // namespace spreadcpm
