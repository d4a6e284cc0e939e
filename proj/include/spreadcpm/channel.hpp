#pragma once

#include <optional>
#include <utility>

#include "spreadcpm/rng.hpp"
#include "spreadcpm/signal.hpp"

namespace spreadcpm {

// Narrowband QPSK interferer: rectangular-pulse QPSK at a symbol rate far
// below the CPM rate, at a fixed frequency offset inside the main lobe.
struct NbiConfig {
  double symbol_rate = 5e-4;   // interferer symbols per CPM symbol
  double freq_offset = 0.0;    // cycles per CPM symbol
  double power = 0.0;          // average power, same scale as sigma2
};

enum class PhaseMode { Known, UniformRandom };

struct ChannelConfig {
  double sigma2 = 0.0;                 // continuous-time noise power
  PhaseMode phase_mode = PhaseMode::Known;
  double theta = 0.0;                  // used in Known mode, cycles
  std::optional<NbiConfig> nbi;
};

// Adds complex white Gaussian noise calibrated so the windowed correlator
// statistics match the continuous-time model: each real component of a
// sample gets variance sigma2/dt, hence for any waveform f
//   Var Re<f,G> = Var Im<f,G> = sigma2 ||f||^2.
// (The total complex variance is 2 sigma2 ||f||^2; the coherent receiver
// sees only the in-phase half.)
ComplexSignal add_awgn(const ComplexSignal& sig, double sigma2, RngStream& rng);

// Rotates by e^{2 pi i theta}; theta is drawn uniform on [0,1) in
// UniformRandom mode. Returns the rotated signal and the theta used.
std::pair<ComplexSignal, double> apply_phase(const ComplexSignal& sig,
                                             const ChannelConfig& cfg, RngStream& rng);

// Adds the interferer with independent equiprobable QPSK symbols of constant
// amplitude sqrt(power). The frequency offset must respect the sampled
// Nyquist band.
ComplexSignal add_nbi_qpsk(const ComplexSignal& sig, const NbiConfig& nbi, RngStream& rng);

// One-time draw of an interferer frequency, uniform over [-band, band].
double draw_nbi_freq(double band, RngStream& rng);

}  // namespace spreadcpm
