#pragma once

#include <vector>

#include "spreadcpm/codebook.hpp"
#include "spreadcpm/cpm.hpp"
#include "spreadcpm/rng.hpp"
#include "spreadcpm/signal.hpp"

namespace spreadcpm {

// Candidate waveforms for a classification window, one per hypothesis.
// All waveforms must share the sample grid and cover the window.
struct CandidateSet {
  std::vector<ComplexSignal> waveforms;
  std::vector<int> labels;
};

// Windowed correlator <f, g> = sum f conj(g) dt over [w.start, w.end).
// Signals are paired by absolute time; both must cover the window on the
// same grid spacing.
cplx inner_product(const ComplexSignal& f, const ComplexSignal& g, ObservationWindow w);

// ||f||^2 over the window.
double norm2(const ComplexSignal& f, ObservationWindow w);

// Correlation classifier for known phase: argmax_j Re<f_j, rx> - ||f_j||^2/2
// (the likelihood-ratio test at threshold 1). Exactly two candidates.
// Exact ties are broken by a Bernoulli(1/2) draw from rng.
int coherent_classify(const ComplexSignal& rx, const CandidateSet& cands,
                      ObservationWindow w, RngStream& rng);

// Envelope classifier for unknown phase: argmax_j |<f_j, rx>|. Candidates
// should be equal-norm (within 1%); decisions are invariant to any global
// phase rotation of rx.
int envelope_classify(const ComplexSignal& rx, const CandidateSet& cands,
                      ObservationWindow w, RngStream& rng);

enum class DemodMode { Coherent, Noncoherent };

// Codeword-level (joint) demodulation of one data bit: correlates the
// N-chip window for bit_index against the two codeword-expanded waveforms.
// Candidates use the all-zeros-history phase convention; in coherent mode
// phase_ref_cycles carries the accumulated phase of everything before the
// window so continuity with the preceding symbols is honored.
int joint_codeword_demod(const ComplexSignal& rx, const Codebook& book,
                         const CpmConfig& cfg, int bit_index, DemodMode mode,
                         RngStream& rng, double phase_ref_cycles = 0.0);

// Noncoherent-block demodulation: envelope correlations over a k_bits-wide
// neighborhood (k odd, centered; shortened at message edges), averaging the
// squared envelopes |<f,rx>|^2 over the 2^(K-1) candidates sharing each
// center-bit value (square-law noncoherent combining). message_bits is the
// total message length so edge windows can be clipped.
int noncoherent_block_demod(const ComplexSignal& rx, int k_bits, const Codebook& book,
                            const CpmConfig& cfg, int bit_index, int message_bits,
                            RngStream& rng);

// Precomputed candidate banks for repeated block demodulation. Banks are
// immutable after construction and safe for concurrent readers.
class BlockDemodulator {
 public:
  BlockDemodulator(const CpmConfig& cfg, const Codebook& book, int k_bits,
                   int message_bits);

  int decide(const ComplexSignal& rx, int bit_index, RngStream& rng) const;

  int k_bits() const { return k_bits_; }

 private:
  struct Bank {
    int lo = 0;                 // first bit index in the window
    int width = 0;              // bits covered
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<ComplexSignal> waveforms;  // 2^width candidates
  };
  const Bank& bank_for(int bit_index) const { return banks_[static_cast<std::size_t>(bit_index)]; }

  CpmConfig cfg_;
  int rate_n_ = 1;
  int k_bits_ = 1;
  int message_bits_ = 0;
  std::vector<Bank> banks_;
};

}  // namespace spreadcpm
