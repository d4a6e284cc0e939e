#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spreadcpm/signal.hpp"

namespace spreadcpm {

// How a codebook's chip words were generated. Seeded modes are fully
// reproducible from the stored parameters.
struct Provenance {
  enum class Kind { Repetition, SeededPrng, Lfsr } kind = Kind::Repetition;
  std::uint64_t seed = 0;             // SeededPrng
  std::vector<int> taps;              // Lfsr: polynomial exponents, e.g. {4,1}
  std::uint32_t initial_state = 1;    // Lfsr

  static Provenance repetition() { return {}; }
  static Provenance seeded(std::uint64_t seed);
  static Provenance lfsr(std::vector<int> taps, std::uint32_t initial_state);

  std::string describe() const;
};

// Per bit position, the N-chip word representing bit 0; bit 1 always uses
// the bitwise complement. Immutable after construction.
class Codebook {
 public:
  static Codebook build(int rate_n, int num_positions, const Provenance& prov);

  int rate_n() const { return rate_n_; }
  int num_positions() const { return static_cast<int>(zero_words_.size()); }
  const Provenance& provenance() const { return prov_; }

  // Chip j of the word for (position, bit).
  std::uint8_t chip(int position, int bit, int j) const {
    const std::uint8_t c = zero_words_[static_cast<std::size_t>(position)]
                                      [static_cast<std::size_t>(j)];
    return bit ? static_cast<std::uint8_t>(1 - c) : c;
  }
  BitSeq word(int position, int bit) const;

  void save(std::ostream& os) const;
  static Codebook load(std::istream& is);

 private:
  Codebook() = default;
  int rate_n_ = 1;
  std::vector<BitSeq> zero_words_;
  Provenance prov_;
};

// Chip-level LFSR stream (Fibonacci form). Exposed for tests and for
// regenerating codebooks from stored provenance.
class Lfsr {
 public:
  // taps are polynomial exponents; validated against a built-in table of
  // primitive polynomials for degrees 3..16.
  Lfsr(const std::vector<int>& taps, std::uint32_t initial_state);
  int next_bit();
  std::uint32_t state() const { return state_; }

 private:
  std::vector<int> taps_;
  int degree_ = 0;
  std::uint32_t state_ = 1;
};

// bits -> concatenated chip words. Throws std::out_of_range if the message
// is longer than the codebook.
BitSeq encode(const BitSeq& bits, const Codebook& book);

// Hard-decision majority vote against the stored words. rate_n must be odd
// (ties undefined otherwise) and the chip count divisible by it.
BitSeq majority_decode(const BitSeq& chip_decisions, const Codebook& book);

enum class MajorityMethod { Exact, Asymptotic };

// Block error probability of an n-chip majority vote at chip error p.
//   Exact:      binomial tail sum from (n+1)/2
//   Asymptotic: (4p(1-p))^((n+1)/2) / (sqrt(2 pi) ((1-2p) sqrt(n) + 1/sqrt(n)))
double majority_error_prob(double p, int n, MajorityMethod method = MajorityMethod::Exact);

}  // namespace spreadcpm
