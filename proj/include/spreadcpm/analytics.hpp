#pragma once

#include <optional>
#include <vector>

#include "spreadcpm/cpm.hpp"

namespace spreadcpm {

// p = 1/2 - 1/2 erf(d / (2 sqrt(2) sigma)): coherent binary classification
// error for candidates at L2 distance d in noise of power sigma^2.
double p_coherent(double distance, double sigma);

// Envelope-classifier error for equal-norm candidates at distance d with
// normalized correlation magnitude |R|:
//   p = e^{-(u^2+v^2)/2} [ sum_k (u/v)^k I_k(uv) - I_0(uv)/2 ],
//   u,v = d/(2 sqrt(2) sigma) (1 -/+ sqrt(1-|R|^2))^{1/2}.
// |R| = 0 reduces to p = 1/2 exp(-d^2 / (8 sigma^2)).
double p_noncoherent(double distance, double correlation_mag, double sigma);

struct ErfBounds {
  double erf = 0.0;
  double linear_bound = 0.0;            // 2x/sqrt(pi), an upper bound
  std::optional<double> tail_approx;    // 1 - e^{-x^2}/(sqrt(pi) x); absent at x=0
};
ErfBounds erf_bounds_check(double x);

// Joint (codeword-level) demodulation error asymptotics for rate n at noise
// power sigma2, with distance residual e0:
//   nc: 1/2 I0(sqrt(2) e0 / (8 sigma2)) exp(-n / (4 sigma2))
//   c:  sigma / sqrt(pi n) exp(-n / (4 sigma2))
struct JointBounds {
  double p_nc = 0.0;
  double p_c = 0.0;
};
JointBounds bounds_joint(int n, double sigma2, double e0 = 0.0);

// Lower bounds on the separate (chip-then-majority) path for odd n when the
// noise is at least as strong as the single-symbol separation.
struct SeparateBounds {
  double p_nc_lower = 0.0;
  double p_c_lower = 0.0;
};
SeparateBounds bounds_separate(int n);

struct BoundSet {
  int n = 0;
  double sigma2 = 0.0;
  double p_joint_nc = 0.0;
  double p_joint_c = 0.0;
  double p_sep_nc_lower = 0.0;
  double p_sep_c_lower = 0.0;
};
BoundSet evaluate_bounds(int n, double sigma2, double e0 = 0.0);

// sigma = c / (2 sqrt(Es/N0)), from Es/N0 = d^2 / (4 sigma^2) with d = c the
// single-symbol distance. es_n0 is the linear ratio.
double esn0_to_sigma(double es_n0, double c);
double sigma_to_esn0(double sigma, double c);

// ||s_{0} - s_{1}||_{L2(0,1)} for the configured modulation.
double single_symbol_distance(const CpmConfig& cfg);

enum class ScanMode { Repetition, AllSequences };

struct DistanceReport {
  int rate_n = 0;
  double mean_distance = 0.0;
  double min_distance = 0.0;
  double max_distance = 0.0;
  double mean_residual = 0.0;  // mean of (2n - distance^2)
  std::vector<double> distances;  // per-sequence table when requested
};

// Distances between complement codeword waveforms over (0, n).
//   Repetition:   the single flipped-suffix pair (all zeros vs all ones).
//   AllSequences: every B of length n against its full complement
//                 (2^n sequences; n <= 14).
DistanceReport distance_scan_one(const CpmConfig& cfg, int n, ScanMode mode,
                                 bool emit_table = false, int threads = 1);
std::vector<DistanceReport> distance_scan(const CpmConfig& cfg, int n_min, int n_max,
                                          ScanMode mode, bool emit_table = false,
                                          int threads = 1);

}  // namespace spreadcpm
