#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spreadcpm/ber.hpp"
#include "spreadcpm/rng.hpp"
#include "spreadcpm/signal.hpp"

namespace spreadcpm {

// Rate-1/n feedforward convolutional code. Generators are given in octal,
// most significant bit acting on the newest input bit.
struct ConvCode {
  int constraint_len = 3;
  std::vector<std::uint32_t> generators;  // parsed masks, one per output

  static ConvCode from_octal(int constraint_len, const std::vector<std::string>& octal);

  int outputs_per_bit() const { return static_cast<int>(generators.size()); }
  void validate() const;

  // Well-known optimum-distance-profile defaults (constraint length 8).
  static ConvCode rate_half_k8();   // (247, 371) octal
  static ConvCode rate_third_k8();  // (225, 331, 367) octal
};

// Zero-state encoding with constraint_len-1 flush bits appended; output
// length = n * (len + constraint_len - 1).
BitSeq conv_encode(const BitSeq& bits, const ConvCode& code);

// Hard-decision Viterbi (Hamming metric), terminated in state 0. Returns
// the message without the flush bits.
BitSeq viterbi_decode(const BitSeq& chip_decisions, const ConvCode& code);

// Gray-mapped QPSK over AWGN with matched-filter detection; the closed-form
// reference is BER = 1/2 - 1/2 erf(sqrt(Es/N0 / 2)) per bit.
BerEstimate qpsk_modem(const BitSeq& bits, double es_n0, RngStream& rng);

// Chip word -> Gray QPSK symbols (two chips per symbol, unit energy).
std::vector<cplx> qpsk_map(const BitSeq& chips);

// ||map(word) - map(complement word)||^2 with unit-energy symbols.
double qpsk_word_distance2(const BitSeq& word);

}  // namespace spreadcpm
