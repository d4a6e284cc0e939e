#include "spreadcpm/cpm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spreadcpm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void CpmConfig::validate() const {
  if (!(mod_index > 0.0)) throw std::invalid_argument("cpm: modulation index must be > 0");
  if (samples_per_symbol < 4) throw std::invalid_argument("cpm: samples_per_symbol must be >= 4");
}

CpmModulator::CpmModulator(const CpmConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const double w = cfg_.pulse.support();
  const int per_symbol = std::max(64 * cfg_.samples_per_symbol, 2048);
  const auto knots = static_cast<std::size_t>(std::ceil(2.0 * w * per_symbol)) + 1;
  table_step_ = 2.0 * w / static_cast<double>(knots - 1);
  inv_step_ = 1.0 / table_step_;
  table_.resize(knots);
  for (std::size_t i = 0; i < knots; ++i) {
    table_[i] = cfg_.pulse.integral(-w + static_cast<double>(i) * table_step_);
  }
  table_.front() = 0.0;
  table_.back() = 1.0;
}

double CpmModulator::cumulative(double u) const {
  const double w = cfg_.pulse.support();
  if (u <= -w) return 0.0;
  if (u >= w) return 1.0;
  const double x = (u + w) * inv_step_;
  const auto i = static_cast<std::size_t>(x);
  const double frac = x - static_cast<double>(i);
  return table_[i] + frac * (table_[i + 1] - table_[i]);
}

BitSeq CpmModulator::default_history() const {
  // Zeros deep enough that anything older would only add a constant phase.
  const auto depth = static_cast<std::size_t>(std::ceil(cfg_.pulse.support() + 0.5));
  return BitSeq(depth, 0);
}

double CpmModulator::phase_at(const BitSeq& bits, const std::vector<std::int8_t>& signs,
                              double t) const {
  // signs holds 2b-1 for history followed by message; symbol j's ramp center
  // is at c_j = j - history_len + 1/2.
  const double w = cfg_.pulse.support();
  const auto total = static_cast<std::ptrdiff_t>(signs.size());
  const auto hist = static_cast<std::ptrdiff_t>(signs.size() - bits.size());
  double acc = 0.0;
  for (std::ptrdiff_t j = 0; j < total; ++j) {
    const double u = t - (static_cast<double>(j - hist) + 0.5);
    if (u <= -w) break;  // later symbols contribute nothing yet
    acc += signs[static_cast<std::size_t>(j)] * cumulative(u);
  }
  return 0.5 * cfg_.mod_index * acc;
}

namespace {

std::vector<std::int8_t> make_signs(const BitSeq& bits, const BitSeq& history) {
  std::vector<std::int8_t> signs;
  signs.reserve(history.size() + bits.size());
  for (auto b : history) signs.push_back(b ? 1 : -1);
  for (auto b : bits) signs.push_back(b ? 1 : -1);
  return signs;
}

}  // namespace

std::vector<double> CpmModulator::phase_trajectory(const BitSeq& bits,
                                                   const std::vector<double>& times,
                                                   const std::optional<BitSeq>& history) const {
  if (bits.empty()) throw std::invalid_argument("phase_trajectory: empty symbol sequence");
  const BitSeq hist = history ? *history : default_history();
  const auto signs = make_signs(bits, hist);
  const double t_max = static_cast<double>(bits.size());
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < -detail::kGridTol || t > t_max + detail::kGridTol) {
      throw std::out_of_range("phase_trajectory: time outside modulated range");
    }
    out.push_back(phase_at(bits, signs, t));
  }
  return out;
}

ComplexSignal CpmModulator::modulate(const BitSeq& bits, double theta_cycles,
                                     const std::optional<BitSeq>& history) const {
  if (bits.empty()) throw std::invalid_argument("modulate: empty symbol sequence");
  const BitSeq hist = history ? *history : default_history();
  const auto signs = make_signs(bits, hist);
  const int sps = cfg_.samples_per_symbol;
  const double dt = 1.0 / sps;
  const double w = cfg_.pulse.support();
  const auto hist_len = static_cast<std::ptrdiff_t>(hist.size());
  const auto total = static_cast<std::ptrdiff_t>(signs.size());

  ComplexSignal sig;
  sig.dt = dt;
  sig.t_start = 0.0;
  sig.samples.resize(bits.size() * static_cast<std::size_t>(sps));

  // Sweep samples in time order keeping a running sum over symbols whose
  // ramp has saturated; only symbols inside the pulse support are looked up.
  double saturated = 0.0;
  std::ptrdiff_t first_active = 0;
  for (std::size_t i = 0; i < sig.samples.size(); ++i) {
    const double t = (static_cast<double>(i) + 0.5) * dt;
    while (first_active < total &&
           t - (static_cast<double>(first_active - hist_len) + 0.5) >= w) {
      saturated += signs[static_cast<std::size_t>(first_active)];
      ++first_active;
    }
    double acc = saturated;
    for (std::ptrdiff_t j = first_active; j < total; ++j) {
      const double u = t - (static_cast<double>(j - hist_len) + 0.5);
      if (u <= -w) break;
      acc += signs[static_cast<std::size_t>(j)] * cumulative(u);
    }
    const double phi = 0.5 * cfg_.mod_index * acc;
    sig.samples[i] = std::polar(1.0, kTwoPi * (theta_cycles + phi));
  }
  return sig;
}

RealSignal CpmModulator::modulate_passband(const BitSeq& bits, double theta_cycles,
                                           double omega_c,
                                           const std::optional<BitSeq>& history) const {
  const double dt = 1.0 / cfg_.samples_per_symbol;
  if (!(omega_c * dt < 0.5)) {
    throw std::invalid_argument("modulate_passband: carrier violates Nyquist at this oversampling");
  }
  const ComplexSignal bb = modulate(bits, theta_cycles, history);
  RealSignal out;
  out.dt = bb.dt;
  out.t_start = bb.t_start;
  out.samples.resize(bb.samples.size());
  const double sqrt2 = std::sqrt(2.0);
  for (std::size_t i = 0; i < bb.samples.size(); ++i) {
    const double t = bb.sample_time(i);
    const cplx carrier = std::polar(1.0, kTwoPi * omega_c * t);
    out.samples[i] = sqrt2 * std::real(carrier * bb.samples[i]);
  }
  return out;
}

std::vector<double> phase_trajectory(const BitSeq& bits, const CpmConfig& cfg,
                                     const std::vector<double>& times,
                                     const std::optional<BitSeq>& history) {
  return CpmModulator(cfg).phase_trajectory(bits, times, history);
}

ComplexSignal modulate_baseband(const BitSeq& bits, const CpmConfig& cfg,
                                double theta_cycles, const std::optional<BitSeq>& history) {
  return CpmModulator(cfg).modulate(bits, theta_cycles, history);
}

RealSignal modulate_passband(const BitSeq& bits, const CpmConfig& cfg, double theta_cycles,
                             double omega_c, const std::optional<BitSeq>& history) {
  return CpmModulator(cfg).modulate_passband(bits, theta_cycles, omega_c, history);
}

}  // namespace spreadcpm
