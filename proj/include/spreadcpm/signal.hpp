#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spreadcpm {

using cplx = std::complex<double>;
// Bit / chip sequences use one byte per {0,1} symbol.
using BitSeq = std::vector<std::uint8_t>;

// Uniformly sampled complex-baseband waveform. Sample i represents the cell
// [t_start + i*dt, t_start + (i+1)*dt) and is evaluated at the cell midpoint,
// so windowed Riemann sums are second-order accurate. Time is in symbol units.
struct ComplexSignal {
  std::vector<cplx> samples;
  double dt = 0.0;
  double t_start = 0.0;

  std::size_t size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) * dt; }
  double t_end() const { return t_start + duration(); }
  double sample_time(std::size_t i) const {
    return t_start + (static_cast<double>(i) + 0.5) * dt;
  }

  ComplexSignal& rotate(double cycles) {
    const cplx r = std::polar(1.0, 6.283185307179586476925286766559 * cycles);
    for (auto& s : samples) s *= r;
    return *this;
  }

  // Copy of the samples covering [a, b); a and b must lie on cell boundaries.
  ComplexSignal slice(double a, double b) const;

  // Same samples relabeled to begin at time t; used to place candidate
  // waveforms onto a received signal's absolute time axis.
  ComplexSignal with_start(double t) const {
    ComplexSignal out = *this;
    out.t_start = t;
    return out;
  }
};

struct RealSignal {
  std::vector<double> samples;
  double dt = 0.0;
  double t_start = 0.0;

  std::size_t size() const { return samples.size(); }
  double sample_time(std::size_t i) const {
    return t_start + (static_cast<double>(i) + 0.5) * dt;
  }
};

// Half-open observation interval [start, end) in symbol units.
struct ObservationWindow {
  double start = 0.0;
  double end = 0.0;
};

namespace detail {

constexpr double kGridTol = 1e-9;

// Maps an absolute time on a signal's grid to a cell index; throws if the
// time does not sit on a cell boundary.
inline std::size_t cell_index(const ComplexSignal& s, double t, const char* what) {
  const double x = (t - s.t_start) / s.dt;
  const double r = std::round(x);
  if (std::abs(x - r) > kGridTol / s.dt || r < -0.5 ||
      r > static_cast<double>(s.samples.size()) + 0.5) {
    throw std::invalid_argument(std::string(what) + ": window not aligned to sample grid");
  }
  return static_cast<std::size_t>(r);
}

}  // namespace detail

inline ComplexSignal ComplexSignal::slice(double a, double b) const {
  const std::size_t i0 = detail::cell_index(*this, a, "slice");
  const std::size_t i1 = detail::cell_index(*this, b, "slice");
  if (i1 < i0 || i1 > samples.size()) {
    throw std::out_of_range("slice: window outside signal");
  }
  ComplexSignal out;
  out.dt = dt;
  out.t_start = a;
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(i0),
                     samples.begin() + static_cast<std::ptrdiff_t>(i1));
  return out;
}

}  // namespace spreadcpm
