#include "spreadcpm/analytics.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "spreadcpm/specfun.hpp"

namespace spreadcpm {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

double clamp_probability(double p) {
  assert(p > -1e-12 && p < 1.0 + 1e-12);
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace

double p_coherent(double distance, double sigma) {
  if (distance < 0.0) throw std::domain_error("p_coherent: distance must be >= 0");
  if (!(sigma > 0.0)) throw std::domain_error("p_coherent: sigma must be > 0");
  const double x = distance / (2.0 * std::sqrt(2.0) * sigma);
  return clamp_probability(0.5 - 0.5 * erf_rational(x));
}

double p_noncoherent(double distance, double correlation_mag, double sigma) {
  if (distance < 0.0) throw std::domain_error("p_noncoherent: distance must be >= 0");
  if (!(sigma > 0.0)) throw std::domain_error("p_noncoherent: sigma must be > 0");
  if (correlation_mag < 0.0 || correlation_mag > 1.0) {
    throw std::domain_error("p_noncoherent: |R| must be in [0,1]");
  }
  if (distance == 0.0) return 0.5;
  const double x = distance / (2.0 * std::sqrt(2.0) * sigma);
  if (correlation_mag < 1e-14) {
    return clamp_probability(0.5 * std::exp(-x * x));
  }
  const double root = std::sqrt(1.0 - correlation_mag * correlation_mag);
  const double u = x * std::sqrt(1.0 - root);
  const double v = x * std::sqrt(1.0 + root);
  // Work with e^{-uv} I_k(uv): the total prefactor becomes
  // e^{-(u^2+v^2)/2 + uv} = e^{-(v-u)^2/2}, which never overflows.
  const double ratio = u / v;  // < 1, so terms decay geometrically
  const double damp = std::exp(-0.5 * (v - u) * (v - u));
  double pow_ratio = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double term = pow_ratio * bessel_i_scaled(k, u * v);
    sum += term;
    if (k > 0 && term < 1e-15 * sum) break;
    pow_ratio *= ratio;
  }
  const double p = damp * (sum - 0.5 * bessel_i_scaled(0, u * v));
  return clamp_probability(p);
}

ErfBounds erf_bounds_check(double x) {
  if (x < 0.0) throw std::domain_error("erf_bounds_check: x must be >= 0");
  ErfBounds out;
  out.erf = erf_rational(x);
  out.linear_bound = 2.0 * x / std::sqrt(kPi);
  if (x > 0.0) {
    out.tail_approx = 1.0 - std::exp(-x * x) / (std::sqrt(kPi) * x);
  }
  assert(out.erf <= out.linear_bound + 1e-15);
  return out;
}

JointBounds bounds_joint(int n, double sigma2, double e0) {
  if (n < 1) throw std::domain_error("bounds_joint: n must be >= 1");
  if (!(sigma2 > 0.0)) throw std::domain_error("bounds_joint: sigma2 must be > 0");
  JointBounds out;
  const double decay = std::exp(-static_cast<double>(n) / (4.0 * sigma2));
  out.p_nc = 0.5 * bessel_i(0, std::sqrt(2.0) * e0 / (8.0 * sigma2)) * decay;
  out.p_c = std::sqrt(sigma2) / std::sqrt(kPi * n) * decay;
  return out;
}

SeparateBounds bounds_separate(int n) {
  if (n < 1 || n % 2 == 0) throw std::domain_error("bounds_separate: n must be odd >= 1");
  SeparateBounds out;
  const double e8 = std::exp(-0.125);
  const double half_n1 = 0.5 * (n + 1);
  out.p_nc_lower = std::pow(e8 * (2.0 - e8), half_n1) /
                   (std::sqrt(2.0 * kPi * n) * (1.0 - 0.5 * e8));
  out.p_c_lower = std::pow(1.0 - 1.0 / (2.0 * kPi), half_n1) / std::sqrt(static_cast<double>(n));
  return out;
}

BoundSet evaluate_bounds(int n, double sigma2, double e0) {
  BoundSet b;
  b.n = n;
  b.sigma2 = sigma2;
  const JointBounds j = bounds_joint(n, sigma2, e0);
  b.p_joint_nc = std::min(1.0, j.p_nc);
  b.p_joint_c = std::min(1.0, j.p_c);
  if (n % 2 == 1) {
    const SeparateBounds s = bounds_separate(n);
    b.p_sep_nc_lower = std::min(1.0, s.p_nc_lower);
    b.p_sep_c_lower = std::min(1.0, s.p_c_lower);
  }
  return b;
}

double esn0_to_sigma(double es_n0, double c) {
  if (!(es_n0 > 0.0)) throw std::domain_error("esn0_to_sigma: Es/N0 must be > 0");
  if (!(c > 0.0)) throw std::domain_error("esn0_to_sigma: distance must be > 0");
  return c / (2.0 * std::sqrt(es_n0));
}

double sigma_to_esn0(double sigma, double c) {
  if (!(sigma > 0.0)) throw std::domain_error("sigma_to_esn0: sigma must be > 0");
  if (!(c > 0.0)) throw std::domain_error("sigma_to_esn0: distance must be > 0");
  const double r = c / (2.0 * sigma);
  return r * r;
}

namespace {

// Per-symbol cumulative-ramp rows on the scan grid; the phase difference
// between a sequence and its complement is h * sum_k s_k row_k with
// s_k = 2 b_k - 1.
std::vector<std::vector<double>> ramp_rows(const CpmModulator& mod, int n) {
  const int sps = mod.config().samples_per_symbol;
  const auto t_count = static_cast<std::size_t>(n) * static_cast<std::size_t>(sps);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
  const ShapingPulse& pulse = mod.config().pulse;
  for (int k = 0; k < n; ++k) {
    auto& row = rows[static_cast<std::size_t>(k)];
    row.resize(t_count);
    for (std::size_t i = 0; i < t_count; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / sps;
      row[i] = pulse.integral(t - k - 0.5);
    }
  }
  return rows;
}

double kahan_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// distance^2 = sum_t (2 - 2 cos(2 pi h delta_phi(t))) dt over (0, n).
double dist2_from_delta(const std::vector<double>& delta, double h, double dt) {
  double acc = 0.0, comp = 0.0;
  for (double d : delta) {
    const double x = (1.0 - std::cos(kTwoPi * h * d)) - comp;
    const double t = acc + x;
    comp = (t - acc) - x;
    acc = t;
  }
  return 2.0 * acc * dt;
}

}  // namespace

double single_symbol_distance(const CpmConfig& cfg) {
  const CpmModulator mod(cfg);
  const auto rows = ramp_rows(mod, 1);
  return std::sqrt(dist2_from_delta(rows[0], cfg.mod_index, 1.0 / cfg.samples_per_symbol));
}

DistanceReport distance_scan_one(const CpmConfig& cfg, int n, ScanMode mode,
                                 bool emit_table, int threads) {
  cfg.validate();
  if (n < 1) throw std::invalid_argument("distance_scan: n must be >= 1");
  if (mode == ScanMode::AllSequences && n > 14) {
    throw std::invalid_argument("distance_scan: exhaustive mode capped at n = 14");
  }
  const CpmModulator mod(cfg);
  const double h = cfg.mod_index;
  const double dt = 1.0 / cfg.samples_per_symbol;
  const auto rows = ramp_rows(mod, n);
  const auto t_count = rows[0].size();

  DistanceReport rep;
  rep.rate_n = n;

  if (mode == ScanMode::Repetition) {
    std::vector<double> delta(t_count, 0.0);
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < t_count; ++i) delta[i] += row[i];
    }
    const double d2 = dist2_from_delta(delta, h, dt);
    const double d = std::sqrt(d2);
    rep.mean_distance = rep.min_distance = rep.max_distance = d;
    rep.mean_residual = 2.0 * n - d2;
    if (emit_table) rep.distances = {d};
    return rep;
  }

  const std::size_t total = std::size_t{1} << n;
  std::vector<double> dists(total);
  std::vector<double> residuals(total);

  // Gray-code walk: consecutive sequence indices differ in one bit, so the
  // phase-difference profile updates in O(t_count). Work is split into
  // fixed-size chunks (independent of the thread count), each rebuilding its
  // profile from scratch, so every sequence's result is bit-identical no
  // matter how the chunks are scheduled.
  constexpr std::size_t kChunk = 256;
  const std::size_t num_chunks = (total + kChunk - 1) / kChunk;
  auto scan_chunk = [&](std::size_t begin, std::size_t end) {
    std::vector<double> delta(t_count, 0.0);
    const std::size_t g0 = begin ^ (begin >> 1);
    for (int k = 0; k < n; ++k) {
      const double s = ((g0 >> k) & 1u) ? 1.0 : -1.0;
      const auto& row = rows[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < t_count; ++i) delta[i] += s * row[i];
    }
    std::size_t gray = g0;
    for (std::size_t idx = begin; idx < end; ++idx) {
      const double d2 = dist2_from_delta(delta, h, dt);
      dists[gray] = std::sqrt(d2);
      residuals[gray] = 2.0 * n - d2;
      if (idx + 1 < end) {
        const std::size_t next_gray = (idx + 1) ^ ((idx + 1) >> 1);
        const std::size_t flipped = gray ^ next_gray;
        int bit = 0;
        while (!((flipped >> bit) & 1u)) ++bit;
        const double step = ((next_gray >> bit) & 1u) ? 2.0 : -2.0;
        const auto& row = rows[static_cast<std::size_t>(bit)];
        for (std::size_t i = 0; i < t_count; ++i) delta[i] += step * row[i];
        gray = next_gray;
      }
    }
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      scan_chunk(c * kChunk, std::min(total, (c + 1) * kChunk));
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= num_chunks) return;
        scan_chunk(c * kChunk, std::min(total, (c + 1) * kChunk));
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  rep.mean_distance = kahan_sum(dists) / static_cast<double>(total);
  rep.mean_residual = kahan_sum(residuals) / static_cast<double>(total);
  rep.min_distance = dists[0];
  rep.max_distance = dists[0];
  for (double d : dists) {
    rep.min_distance = std::min(rep.min_distance, d);
    rep.max_distance = std::max(rep.max_distance, d);
  }
  if (emit_table) rep.distances = std::move(dists);
  return rep;
}

std::vector<DistanceReport> distance_scan(const CpmConfig& cfg, int n_min, int n_max,
                                          ScanMode mode, bool emit_table, int threads) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("distance_scan: bad n range");
  std::vector<DistanceReport> out;
  out.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  for (int n = n_min; n <= n_max; ++n) {
    out.push_back(distance_scan_one(cfg, n, mode, emit_table, threads));
  }
  return out;
}

}  // namespace spreadcpm
