#pragma once

#include <string>

namespace spreadcpm {

enum class PulseKind { Rectangular, RaisedCosine, Gfsk };

// Frequency shaping pulse F(t): nonnegative, even, unit L1 norm. The pulse is
// centered on t=0; a symbol at index k uses F(t - k - 1/2), so the symbol's
// phase ramp occupies [k + 1/2 - support, k + 1/2 + support].
//
//   rectangular    1 on [-1/2, 1/2)                       (full response)
//   raised cosine  (1 + cos(pi t))/2 on [-1, 1]           (L = 2)
//   gfsk(BT)       erf-difference pulse, truncated to |t| <= 4
//
// integral(t) is the exact cumulative integral from -infinity; the modulator
// caches it on a dense grid for the hot path.
class ShapingPulse {
 public:
  static ShapingPulse rectangular();
  static ShapingPulse raised_cosine();
  static ShapingPulse gfsk(double bt);

  PulseKind kind() const { return kind_; }
  double bt() const { return bt_; }
  // Half-width of the (possibly truncated) support, in symbol units.
  double support() const { return support_; }

  double eval(double t) const;
  double integral(double t) const;

  std::string describe() const;

 private:
  ShapingPulse(PulseKind kind, double bt, double support)
      : kind_(kind), bt_(bt), support_(support) {}

  PulseKind kind_;
  double bt_;
  double support_;
};

}  // namespace spreadcpm
