#include "spreadcpm/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace spreadcpm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ComplexSignal add_awgn(const ComplexSignal& sig, double sigma2, RngStream& rng) {
  if (sigma2 < 0.0) throw std::domain_error("add_awgn: sigma2 must be >= 0");
  ComplexSignal out = sig;
  if (sigma2 == 0.0) return out;
  const double scale = std::sqrt(sigma2 / sig.dt);
  for (auto& s : out.samples) {
    s += cplx(scale * rng.gaussian(), scale * rng.gaussian());
  }
  return out;
}

std::pair<ComplexSignal, double> apply_phase(const ComplexSignal& sig,
                                             const ChannelConfig& cfg, RngStream& rng) {
  const double theta = (cfg.phase_mode == PhaseMode::UniformRandom) ? rng.uniform() : cfg.theta;
  ComplexSignal out = sig;
  if (theta != 0.0) out.rotate(theta);
  return {std::move(out), theta};
}

ComplexSignal add_nbi_qpsk(const ComplexSignal& sig, const NbiConfig& nbi, RngStream& rng) {
  if (nbi.power < 0.0) throw std::domain_error("add_nbi_qpsk: power must be >= 0");
  if (!(nbi.symbol_rate > 0.0)) throw std::domain_error("add_nbi_qpsk: symbol rate must be > 0");
  if (std::abs(nbi.freq_offset) * sig.dt >= 0.5) {
    throw std::invalid_argument("add_nbi_qpsk: frequency offset beyond Nyquist");
  }
  ComplexSignal out = sig;
  if (nbi.power == 0.0) return out;
  const double amp = std::sqrt(nbi.power);
  const double sym_len = 1.0 / nbi.symbol_rate;  // CPM symbol units
  long current = -1;
  cplx point(0.0, 0.0);
  static const cplx kQpsk[4] = {
      {0.7071067811865476, 0.7071067811865476},
      {-0.7071067811865476, 0.7071067811865476},
      {-0.7071067811865476, -0.7071067811865476},
      {0.7071067811865476, -0.7071067811865476},
  };
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = out.sample_time(i);
    const long sym = static_cast<long>(std::floor((t - out.t_start) / sym_len));
    while (current < sym) {
      point = kQpsk[rng.below(4)];
      ++current;
    }
    out.samples[i] += amp * point * std::polar(1.0, kTwoPi * nbi.freq_offset * t);
  }
  return out;
}

double draw_nbi_freq(double band, RngStream& rng) {
  if (!(band > 0.0)) throw std::domain_error("draw_nbi_freq: band must be > 0");
  return (2.0 * rng.uniform() - 1.0) * band;
}

}  // namespace spreadcpm
