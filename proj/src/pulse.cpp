#include "spreadcpm/pulse.hpp"

#include <cmath>
#include <stdexcept>

#include "spreadcpm/specfun.hpp"

namespace spreadcpm {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;

// GFSK pulses with BT >= 0.2 are below 1e-9 outside |t| <= 4.
constexpr double kGfskSupport = 4.0;

double gfsk_gamma(double bt) { return 2.0 * kPi * bt / std::sqrt(2.0 * std::log(2.0)); }

// Antiderivative helper: d/du [u erf(u) + exp(-u^2)/sqrt(pi)] = erf(u).
double erf_antideriv(double u) {
  return u * erf_rational(u) + std::exp(-u * u) / kSqrtPi;
}

}  // namespace

ShapingPulse ShapingPulse::rectangular() {
  return ShapingPulse(PulseKind::Rectangular, 0.0, 0.5);
}

ShapingPulse ShapingPulse::raised_cosine() {
  return ShapingPulse(PulseKind::RaisedCosine, 0.0, 1.0);
}

ShapingPulse ShapingPulse::gfsk(double bt) {
  if (!(bt > 0.0)) throw std::invalid_argument("gfsk: BT must be positive");
  return ShapingPulse(PulseKind::Gfsk, bt, kGfskSupport);
}

double ShapingPulse::eval(double t) const {
  switch (kind_) {
    case PulseKind::Rectangular:
      return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
    case PulseKind::RaisedCosine:
      if (t <= -1.0 || t >= 1.0) return 0.0;
      return 0.5 * (1.0 + std::cos(kPi * t));
    case PulseKind::Gfsk: {
      if (t <= -support_ || t >= support_) return 0.0;
      const double g = gfsk_gamma(bt_);
      return 0.5 * (erf_rational(g * (t + 0.5)) - erf_rational(g * (t - 0.5)));
    }
  }
  return 0.0;
}

double ShapingPulse::integral(double t) const {
  if (t <= -support_) return 0.0;
  if (t >= support_) return 1.0;
  switch (kind_) {
    case PulseKind::Rectangular:
      return t + 0.5;
    case PulseKind::RaisedCosine:
      return 0.5 * (t + 1.0) + std::sin(kPi * t) / (2.0 * kPi);
    case PulseKind::Gfsk: {
      const double g = gfsk_gamma(bt_);
      // integral of the erf difference; the constant fixes q(-inf) = 0.
      return (erf_antideriv(g * (t + 0.5)) - erf_antideriv(g * (t - 0.5))) / (2.0 * g) + 0.5;
    }
  }
  return 0.0;
}

std::string ShapingPulse::describe() const {
  switch (kind_) {
    case PulseKind::Rectangular: return "rectangular";
    case PulseKind::RaisedCosine: return "raised-cosine";
    case PulseKind::Gfsk: return "gfsk(BT=" + std::to_string(bt_) + ")";
  }
  return "?";
}

}  // namespace spreadcpm
