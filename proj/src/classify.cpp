#include "spreadcpm/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spreadcpm {

namespace {

struct WindowSpan {
  const cplx* f;
  const cplx* g;
  std::size_t count;
  double dt;
};

WindowSpan resolve(const ComplexSignal& f, const ComplexSignal& g, ObservationWindow w) {
  if (!(w.end > w.start)) throw std::invalid_argument("inner_product: empty window");
  if (std::abs(f.dt - g.dt) > 1e-15) {
    throw std::invalid_argument("inner_product: mismatched sample intervals");
  }
  const std::size_t fi = detail::cell_index(f, w.start, "inner_product");
  const std::size_t gi = detail::cell_index(g, w.start, "inner_product");
  const std::size_t fe = detail::cell_index(f, w.end, "inner_product");
  if (fe > f.samples.size() || fi > fe) {
    throw std::invalid_argument("inner_product: window outside first signal");
  }
  const std::size_t count = fe - fi;
  if (gi + count > g.samples.size()) {
    throw std::invalid_argument("inner_product: window outside second signal");
  }
  return {f.samples.data() + fi, g.samples.data() + gi, count, f.dt};
}

}  // namespace

cplx inner_product(const ComplexSignal& f, const ComplexSignal& g, ObservationWindow w) {
  const WindowSpan s = resolve(f, g, w);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < s.count; ++i) {
    const cplx p = s.f[i] * std::conj(s.g[i]);
    re += p.real();
    im += p.imag();
  }
  return cplx(re * s.dt, im * s.dt);
}

double norm2(const ComplexSignal& f, ObservationWindow w) {
  const WindowSpan s = resolve(f, f, w);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.count; ++i) acc += std::norm(s.f[i]);
  return acc * s.dt;
}

namespace {

int argmax_with_ties(const std::vector<double>& stats, const std::vector<int>& labels,
                     RngStream& rng) {
  double best = stats[0];
  for (double s : stats) best = std::max(best, s);
  std::vector<int> tied;
  for (std::size_t j = 0; j < stats.size(); ++j) {
    if (stats[j] == best) tied.push_back(labels[j]);
  }
  if (tied.size() == 1) return tied[0];
  // Exact ties have probability zero under noise; a dedicated draw keeps
  // degenerate cases reproducible.
  return tied[rng.below(static_cast<std::uint32_t>(tied.size()))];
}

}  // namespace

int coherent_classify(const ComplexSignal& rx, const CandidateSet& cands,
                      ObservationWindow w, RngStream& rng) {
  if (cands.waveforms.size() != 2 || cands.labels.size() != 2) {
    throw std::invalid_argument("coherent_classify: exactly two candidates required");
  }
  std::vector<double> stats(2);
  for (std::size_t j = 0; j < 2; ++j) {
    stats[j] = std::real(inner_product(cands.waveforms[j], rx, w)) -
               0.5 * norm2(cands.waveforms[j], w);
  }
  return argmax_with_ties(stats, cands.labels, rng);
}

int envelope_classify(const ComplexSignal& rx, const CandidateSet& cands,
                      ObservationWindow w, RngStream& rng) {
  if (cands.waveforms.size() < 2 || cands.labels.size() != cands.waveforms.size()) {
    throw std::invalid_argument("envelope_classify: need at least two labeled candidates");
  }
  std::vector<double> stats(cands.waveforms.size());
  for (std::size_t j = 0; j < cands.waveforms.size(); ++j) {
    stats[j] = std::abs(inner_product(cands.waveforms[j], rx, w));
  }
  return argmax_with_ties(stats, cands.labels, rng);
}

int joint_codeword_demod(const ComplexSignal& rx, const Codebook& book,
                         const CpmConfig& cfg, int bit_index, DemodMode mode,
                         RngStream& rng, double phase_ref_cycles) {
  const int n = book.rate_n();
  const double a = static_cast<double>(bit_index) * n;
  const double b = a + n;
  if (a < rx.t_start - detail::kGridTol || b > rx.t_end() + detail::kGridTol) {
    throw std::out_of_range("joint_codeword_demod: codeword window outside signal");
  }
  const CpmModulator mod(cfg);
  CandidateSet cands;
  cands.labels = {0, 1};
  for (int bit = 0; bit < 2; ++bit) {
    ComplexSignal cand = mod.modulate(book.word(bit_index, bit), 0.0).with_start(a);
    if (mode == DemodMode::Coherent && phase_ref_cycles != 0.0) {
      cand.rotate(phase_ref_cycles);
    }
    cands.waveforms.push_back(std::move(cand));
  }
  const ObservationWindow w{a, b};
  return mode == DemodMode::Coherent ? coherent_classify(rx, cands, w, rng)
                                     : envelope_classify(rx, cands, w, rng);
}

BlockDemodulator::BlockDemodulator(const CpmConfig& cfg, const Codebook& book,
                                   int k_bits, int message_bits)
    : cfg_(cfg), rate_n_(book.rate_n()), k_bits_(k_bits), message_bits_(message_bits) {
  if (k_bits < 1 || k_bits % 2 == 0) {
    throw std::invalid_argument("block demod: k_bits must be odd (centered window)");
  }
  if (k_bits > 10) {
    throw std::invalid_argument("block demod: k_bits capped at 10 (2^K candidate synthesis)");
  }
  if (message_bits < 1 || message_bits > book.num_positions()) {
    throw std::invalid_argument("block demod: message length exceeds codebook");
  }
  const CpmModulator mod(cfg_);
  const int half = k_bits / 2;
  banks_.resize(static_cast<std::size_t>(message_bits));
  for (int a = 0; a < message_bits; ++a) {
    Bank& bank = banks_[static_cast<std::size_t>(a)];
    bank.lo = std::max(0, a - half);
    const int hi = std::min(message_bits - 1, a + half);
    bank.width = hi - bank.lo + 1;
    bank.t_start = static_cast<double>(bank.lo) * rate_n_;
    bank.t_end = static_cast<double>(hi + 1) * rate_n_;
    const auto count = std::size_t{1} << bank.width;
    bank.waveforms.reserve(count);
    for (std::size_t pattern = 0; pattern < count; ++pattern) {
      BitSeq chips;
      chips.reserve(static_cast<std::size_t>(bank.width) * static_cast<std::size_t>(rate_n_));
      for (int p = 0; p < bank.width; ++p) {
        const int bit = static_cast<int>((pattern >> p) & 1u);
        for (int j = 0; j < rate_n_; ++j) {
          chips.push_back(book.chip(bank.lo + p, bit, j));
        }
      }
      bank.waveforms.push_back(mod.modulate(chips, 0.0).with_start(bank.t_start));
    }
  }
}

int BlockDemodulator::decide(const ComplexSignal& rx, int bit_index, RngStream& rng) const {
  if (bit_index < 0 || bit_index >= message_bits_) {
    throw std::out_of_range("block demod: bit index outside message");
  }
  const Bank& bank = bank_for(bit_index);
  if (bank.t_start < rx.t_start - detail::kGridTol ||
      bank.t_end > rx.t_end() + detail::kGridTol) {
    throw std::out_of_range("block demod: window extends past signal");
  }
  const ObservationWindow w{bank.t_start, bank.t_end};
  const int center = bit_index - bank.lo;
  // Square-law combining: average |<f,rx>|^2 over the candidates sharing
  // each center-bit value. Each value owns half of the 2^width candidates.
  double mean[2] = {0.0, 0.0};
  for (std::size_t pattern = 0; pattern < bank.waveforms.size(); ++pattern) {
    const double mag2 = std::norm(inner_product(bank.waveforms[pattern], rx, w));
    mean[(pattern >> center) & 1u] += mag2;
  }
  if (mean[0] == mean[1]) return rng.bit();
  return mean[1] > mean[0] ? 1 : 0;
}

int noncoherent_block_demod(const ComplexSignal& rx, int k_bits, const Codebook& book,
                            const CpmConfig& cfg, int bit_index, int message_bits,
                            RngStream& rng) {
  const BlockDemodulator demod(cfg, book, k_bits, message_bits);
  return demod.decide(rx, bit_index, rng);
}

}  // namespace spreadcpm
