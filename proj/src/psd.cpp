#include "spreadcpm/psd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spreadcpm {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

void fft_radix2(std::vector<cplx>& data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_radix2: size must be a power of two");
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = data[i + j];
        const cplx v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

PsdEstimate estimate_psd(const ComplexSignal& sig, int tapers) {
  const std::size_t L = sig.samples.size();
  if (L < 64) throw std::invalid_argument("estimate_psd: need at least 64 samples");
  if (tapers < 1) throw std::invalid_argument("estimate_psd: need at least one taper");

  const std::size_t M = next_pow2(L);
  std::vector<double> acc(M, 0.0);
  std::vector<cplx> work(M);
  const double norm = std::sqrt(2.0 / (static_cast<double>(L) + 1.0));
  for (int k = 0; k < tapers; ++k) {
    const double omega = kPi * static_cast<double>(k + 1) / (static_cast<double>(L) + 1.0);
    for (std::size_t i = 0; i < L; ++i) {
      const double w = norm * std::sin(omega * (static_cast<double>(i) + 1.0));
      work[i] = w * sig.samples[i];
    }
    std::fill(work.begin() + static_cast<std::ptrdiff_t>(L), work.end(), cplx(0.0, 0.0));
    fft_radix2(work);
    for (std::size_t j = 0; j < M; ++j) acc[j] += std::norm(work[j]);
  }

  PsdEstimate out;
  out.tapers = tapers;
  out.fft_size = M;
  out.df = 1.0 / (static_cast<double>(M) * sig.dt);
  // Shift to a symmetric grid, dropping the unpaired -Nyquist bin.
  const auto half = static_cast<std::ptrdiff_t>(M / 2);
  out.freq.reserve(M - 1);
  out.power.reserve(M - 1);
  for (std::ptrdiff_t j = -(half - 1); j <= half - 1; ++j) {
    const std::size_t idx = static_cast<std::size_t>((j + static_cast<std::ptrdiff_t>(M)) %
                                                     static_cast<std::ptrdiff_t>(M));
    out.freq.push_back(static_cast<double>(j) * out.df);
    out.power.push_back(acc[idx] * sig.dt / static_cast<double>(tapers));
  }
  const double peak = *std::max_element(out.power.begin(), out.power.end());
  out.power_db.reserve(out.power.size());
  for (double p : out.power) {
    out.power_db.push_back(10.0 * std::log10(std::max(p, peak * 1e-30) / peak));
  }
  return out;
}

}  // namespace spreadcpm
