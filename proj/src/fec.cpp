#include "spreadcpm/fec.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spreadcpm {

namespace {

inline int parity(std::uint32_t x) { return std::popcount(x) & 1; }

}  // namespace

ConvCode ConvCode::from_octal(int constraint_len, const std::vector<std::string>& octal) {
  ConvCode code;
  code.constraint_len = constraint_len;
  for (const auto& s : octal) {
    code.generators.push_back(static_cast<std::uint32_t>(std::stoul(s, nullptr, 8)));
  }
  code.validate();
  return code;
}

void ConvCode::validate() const {
  if (constraint_len < 2 || constraint_len > 16) {
    throw std::invalid_argument("conv code: constraint length must be in 2..16");
  }
  if (generators.empty()) throw std::invalid_argument("conv code: no generators");
  for (auto g : generators) {
    if (g == 0) throw std::invalid_argument("conv code: zero generator polynomial");
    if (g >> constraint_len) {
      throw std::invalid_argument("conv code: generator degree exceeds constraint length");
    }
  }
}

ConvCode ConvCode::rate_half_k8() { return from_octal(8, {"247", "371"}); }
ConvCode ConvCode::rate_third_k8() { return from_octal(8, {"225", "331", "367"}); }

BitSeq conv_encode(const BitSeq& bits, const ConvCode& code) {
  code.validate();
  const int K = code.constraint_len;
  BitSeq out;
  out.reserve((bits.size() + static_cast<std::size_t>(K) - 1) * code.generators.size());
  std::uint32_t reg = 0;  // newest bit in position K-1
  auto push = [&](int b) {
    reg = (reg >> 1) | (static_cast<std::uint32_t>(b) << (K - 1));
    for (auto g : code.generators) {
      out.push_back(static_cast<std::uint8_t>(parity(reg & g)));
    }
  };
  for (auto b : bits) push(b ? 1 : 0);
  for (int i = 0; i < K - 1; ++i) push(0);
  return out;
}

BitSeq viterbi_decode(const BitSeq& chip_decisions, const ConvCode& code) {
  code.validate();
  const int K = code.constraint_len;
  const int n = code.outputs_per_bit();
  if (chip_decisions.size() % static_cast<std::size_t>(n) != 0) {
    throw std::out_of_range("viterbi_decode: chip count not a multiple of the code rate");
  }
  const auto steps = chip_decisions.size() / static_cast<std::size_t>(n);
  if (steps < static_cast<std::size_t>(K - 1)) {
    throw std::out_of_range("viterbi_decode: stream shorter than the flush tail");
  }
  const std::uint32_t num_states = 1u << (K - 1);
  constexpr int kInf = std::numeric_limits<int>::max() / 4;

  // Branch outputs for (state, input), packed as a bitmask over outputs.
  std::vector<std::uint32_t> branch_out(num_states * 2);
  for (std::uint32_t s = 0; s < num_states; ++s) {
    for (int b = 0; b < 2; ++b) {
      const std::uint32_t reg = (static_cast<std::uint32_t>(b) << (K - 1)) | s;
      std::uint32_t mask = 0;
      for (int j = 0; j < n; ++j) {
        mask |= static_cast<std::uint32_t>(parity(reg & code.generators[static_cast<std::size_t>(j)])) << j;
      }
      branch_out[s * 2 + static_cast<std::uint32_t>(b)] = mask;
    }
  }

  std::vector<int> metric(num_states, kInf);
  std::vector<int> next_metric(num_states);
  metric[0] = 0;  // encoder starts in the zero state
  std::vector<std::uint8_t> decisions(steps * num_states);

  for (std::size_t t = 0; t < steps; ++t) {
    std::uint32_t observed = 0;
    for (int j = 0; j < n; ++j) {
      observed |= static_cast<std::uint32_t>(chip_decisions[t * static_cast<std::size_t>(n) +
                                                            static_cast<std::size_t>(j)] & 1u) << j;
    }
    std::fill(next_metric.begin(), next_metric.end(), kInf);
    for (std::uint32_t s = 0; s < num_states; ++s) {
      if (metric[s] >= kInf) continue;
      for (std::uint32_t b = 0; b < 2; ++b) {
        const std::uint32_t reg = (b << (K - 1)) | s;
        const std::uint32_t ns = reg >> 1;
        const int cost = metric[s] + std::popcount(branch_out[s * 2 + b] ^ observed);
        if (cost < next_metric[ns]) {
          next_metric[ns] = cost;
          decisions[t * num_states + ns] =
              static_cast<std::uint8_t>((s & 1u) | (b << 1));  // low bit of old state + input
        }
      }
    }
    metric.swap(next_metric);
  }

  // Traceback from the flushed zero state.
  BitSeq inputs(steps);
  std::uint32_t s = 0;
  for (std::size_t t = steps; t-- > 0;) {
    const std::uint8_t d = decisions[t * num_states + s];
    const std::uint32_t b = (d >> 1) & 1u;
    inputs[t] = static_cast<std::uint8_t>(b);
    s = ((s << 1) | (d & 1u)) & (num_states - 1);  // undo reg >> 1
  }
  inputs.resize(steps - static_cast<std::size_t>(K - 1));  // drop flush bits
  return inputs;
}

BerEstimate qpsk_modem(const BitSeq& bits, double es_n0, RngStream& rng) {
  if (!(es_n0 > 0.0)) throw std::domain_error("qpsk_modem: Es/N0 must be > 0");
  if (bits.size() % 2 != 0) throw std::invalid_argument("qpsk_modem: need an even bit count");
  const double comp_sigma = std::sqrt(1.0 / (2.0 * es_n0));
  long errors = 0;
  for (std::size_t i = 0; i < bits.size(); i += 2) {
    const double si = bits[i] ? -0.7071067811865476 : 0.7071067811865476;
    const double sq = bits[i + 1] ? -0.7071067811865476 : 0.7071067811865476;
    const double yi = si + comp_sigma * rng.gaussian();
    const double yq = sq + comp_sigma * rng.gaussian();
    if ((yi < 0.0) != (bits[i] != 0)) ++errors;
    if ((yq < 0.0) != (bits[i + 1] != 0)) ++errors;
  }
  return BerEstimate::from_counts(1, static_cast<long>(bits.size()), errors, 0);
}

std::vector<cplx> qpsk_map(const BitSeq& chips) {
  if (chips.size() % 2 != 0) throw std::invalid_argument("qpsk_map: need an even chip count");
  std::vector<cplx> out;
  out.reserve(chips.size() / 2);
  for (std::size_t i = 0; i < chips.size(); i += 2) {
    out.emplace_back(chips[i] ? -0.7071067811865476 : 0.7071067811865476,
                     chips[i + 1] ? -0.7071067811865476 : 0.7071067811865476);
  }
  return out;
}

double qpsk_word_distance2(const BitSeq& word) {
  const auto s = qpsk_map(word);
  double acc = 0.0;
  for (const auto& x : s) acc += std::norm(2.0 * x);
  return acc;
}

}  // namespace spreadcpm
