#include "spreadcpm/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spreadcpm {

namespace {

// Cody, "Rational Chebyshev approximation for the error function",
// Math. Comp. 23 (1969); coefficients as in the netlib CALERF routine.
constexpr double kErfA[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                             3.77485237685302021e02, 3.20937758913846947e03,
                             1.85777706184603153e-1};
constexpr double kErfB[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                             1.28261652607737228e03, 2.84423683343917062e03};
constexpr double kErfC[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                             6.61191906371416295e01, 2.98635138197400131e02,
                             8.81952221241769090e02, 1.71204761263407058e03,
                             2.05107837782607147e03, 1.23033935479799725e03,
                             2.15311535474403846e-8};
constexpr double kErfD[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                             5.37181101862009858e02, 1.62138957456669019e03,
                             3.29079923573345963e03, 4.36261909014324716e03,
                             3.43936767414372164e03, 1.23033935480374942e03};
constexpr double kErfP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                             1.25781726111229246e-1, 1.60837851487422766e-2,
                             6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kErfQ[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                             5.27905102951428412e-1, 6.05183413124413191e-2,
                             2.33520497626869185e-3};
constexpr double kInvSqrtPi = 5.6418958354775628695e-1;

// exp(-y^2) with the split-argument trick from CALERF to limit cancellation.
double exp_neg_ysq(double y) {
  const double ysq = std::floor(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// erfc(y) for y > 0.46875.
double erfc_tail(double y) {
  double result;
  if (y <= 4.0) {
    double xnum = kErfC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kErfC[i]) * y;
      xden = (xden + kErfD[i]) * y;
    }
    result = (xnum + kErfC[7]) / (xden + kErfD[7]);
  } else {
    const double ysq = 1.0 / (y * y);
    double xnum = kErfP[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + kErfP[i]) * ysq;
      xden = (xden + kErfQ[i]) * ysq;
    }
    result = ysq * (xnum + kErfP[4]) / (xden + kErfQ[4]);
    result = (kInvSqrtPi - result) / y;
  }
  return exp_neg_ysq(y) * result;
}

}  // namespace

double erf_rational(double x) {
  const double y = std::abs(x);
  if (y <= 0.46875) {
    const double ysq = (y > 1.11e-16) ? y * y : 0.0;
    double xnum = kErfA[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + kErfA[i]) * ysq;
      xden = (xden + kErfB[i]) * ysq;
    }
    return x * (xnum + kErfA[3]) / (xden + kErfB[3]);
  }
  const double tail = erfc_tail(y);
  return x > 0.0 ? 1.0 - tail : tail - 1.0;
}

double erfc_rational(double x) {
  const double y = std::abs(x);
  if (y <= 0.46875) return 1.0 - erf_rational(x);
  const double tail = erfc_tail(y);
  return x > 0.0 ? tail : 2.0 - tail;
}

namespace {

// Plain power series: sum_n (x/2)^(2n+k) / (n! (n+k)!). All terms positive,
// so the relative rounding error stays near machine epsilon times the term
// count. Safe up to |x| around 600 before the largest term overflows.
double bessel_series(int k, double ax) {
  const double half = 0.5 * ax;
  double term;
  if (k == 0) {
    term = 1.0;
  } else {
    // (x/2)^k / k! via logs to dodge intermediate overflow for large k.
    const double lt = k * std::log(half) - std::lgamma(static_cast<double>(k) + 1.0);
    term = std::exp(lt);
    if (term == 0.0) {
      // Rebuild in stages if exp underflowed but the sum might still matter.
      return 0.0;
    }
  }
  double sum = term;
  const double x2 = half * half;
  for (int n = 1; n <= 2000; ++n) {
    term *= x2 / (static_cast<double>(n) * (n + k));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// Asymptotic expansion of exp(-x) I_k(x) for large x, mu = 4k^2:
//   (2 pi x)^(-1/2) [1 - (mu-1)/(8x) + (mu-1)(mu-9)/(2!(8x)^2) - ...]
double bessel_scaled_asymptotic(int k, double ax) {
  const double mu = 4.0 * static_cast<double>(k) * k;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int j = 1; j <= 40; ++j) {
    const double num = mu - (2.0 * j - 1.0) * (2.0 * j - 1.0);
    term *= -num / (8.0 * ax * j);
    if (std::abs(term) >= prev) break;  // asymptotic series: stop at smallest term
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * 3.14159265358979323846 * ax);
}

constexpr double kBesselSeriesMax = 600.0;

}  // namespace

double bessel_i(int k, double x) {
  if (k < 0) throw std::domain_error("bessel_i: order must be >= 0");
  const double ax = std::abs(x);
  const double sign = (x < 0.0 && (k & 1)) ? -1.0 : 1.0;
  if (ax == 0.0) return k == 0 ? 1.0 : 0.0;
  if (ax <= kBesselSeriesMax) return sign * bessel_series(k, ax);
  // Scaled evaluation; may legitimately overflow to +inf for huge x.
  return sign * bessel_scaled_asymptotic(k, ax) * std::exp(ax);
}

double bessel_i_scaled(int k, double x) {
  if (k < 0) throw std::domain_error("bessel_i_scaled: order must be >= 0");
  const double ax = std::abs(x);
  const double sign = (x < 0.0 && (k & 1)) ? -1.0 : 1.0;
  if (ax == 0.0) return k == 0 ? 1.0 : 0.0;
  if (ax <= kBesselSeriesMax) return sign * bessel_series(k, ax) * std::exp(-ax);
  return sign * bessel_scaled_asymptotic(k, ax);
}

}  // namespace spreadcpm
