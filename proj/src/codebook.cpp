#include "spreadcpm/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spreadcpm/rng.hpp"

namespace spreadcpm {

namespace {

// Primitive polynomials over GF(2), degrees 3..16, as exponent sets with the
// constant term implied: taps (4,1) mean x^4 + x + 1. A property test
// verifies the full period 2^d - 1 of every entry.
const std::vector<std::vector<int>>& primitive_taps_table() {
  static const std::vector<std::vector<int>> table = {
      {3, 2},          {3, 1},
      {4, 3},          {4, 1},
      {5, 3},          {5, 2},
      {6, 5},          {6, 1},
      {7, 6},          {7, 3},         {7, 1},
      {8, 6, 5, 4},    {8, 4, 3, 2},
      {9, 5},          {9, 4},
      {10, 7},         {10, 3},
      {11, 9},         {11, 2},
      {12, 6, 4, 1},   {12, 11, 8, 6},
      {13, 4, 3, 1},   {13, 12, 10, 9},
      {14, 5, 3, 1},   {14, 13, 11, 9},
      {15, 14},        {15, 1},
      {16, 15, 13, 4}, {16, 12, 3, 1},
  };
  return table;
}

bool taps_in_table(const std::vector<int>& taps) {
  std::vector<int> sorted = taps;
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  for (const auto& entry : primitive_taps_table()) {
    if (entry == sorted) return true;
  }
  return false;
}

}  // namespace

Provenance Provenance::seeded(std::uint64_t seed) {
  Provenance p;
  p.kind = Kind::SeededPrng;
  p.seed = seed;
  return p;
}

Provenance Provenance::lfsr(std::vector<int> taps, std::uint32_t initial_state) {
  Provenance p;
  p.kind = Kind::Lfsr;
  p.taps = std::move(taps);
  p.initial_state = initial_state;
  return p;
}

std::string Provenance::describe() const {
  switch (kind) {
    case Kind::Repetition: return "repetition";
    case Kind::SeededPrng: return "seeded-prng(seed=" + std::to_string(seed) + ")";
    case Kind::Lfsr: {
      std::string s = "lfsr(taps=";
      for (std::size_t i = 0; i < taps.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(taps[i]);
      }
      s += ";state=" + std::to_string(initial_state) + ")";
      return s;
    }
  }
  return "?";
}

Lfsr::Lfsr(const std::vector<int>& taps, std::uint32_t initial_state)
    : taps_(taps), state_(initial_state) {
  if (taps_.empty()) throw std::invalid_argument("lfsr: no taps given");
  degree_ = *std::max_element(taps_.begin(), taps_.end());
  if (degree_ < 3 || degree_ > 16) {
    throw std::invalid_argument("lfsr: degree must be in 3..16");
  }
  if (!taps_in_table(taps_)) {
    throw std::invalid_argument("lfsr: taps are not a known primitive polynomial");
  }
  const std::uint32_t mask = (1u << degree_) - 1u;
  if ((state_ & mask) == 0u) throw std::invalid_argument("lfsr: initial state must be nonzero");
  state_ &= mask;
}

int Lfsr::next_bit() {
  // With s[i] holding sequence element a_{n+i}, the recurrence for
  // x^d + sum x^t + 1 is a_{n+d} = a_n xor sum_t a_{n+t}.
  const int out = static_cast<int>(state_ & 1u);
  std::uint32_t fb = state_ & 1u;
  for (int t : taps_) {
    if (t != degree_) fb ^= (state_ >> t) & 1u;
  }
  state_ = (state_ >> 1) | (fb << (degree_ - 1));
  return out;
}

Codebook Codebook::build(int rate_n, int num_positions, const Provenance& prov) {
  if (rate_n < 1) throw std::invalid_argument("codebook: rate_n must be >= 1");
  if (num_positions < 1) throw std::invalid_argument("codebook: num_positions must be >= 1");
  Codebook book;
  book.rate_n_ = rate_n;
  book.prov_ = prov;
  book.zero_words_.assign(static_cast<std::size_t>(num_positions),
                          BitSeq(static_cast<std::size_t>(rate_n), 0));
  switch (prov.kind) {
    case Provenance::Kind::Repetition:
      break;  // all-zero words
    case Provenance::Kind::SeededPrng: {
      RngStream rng(prov.seed);
      for (auto& w : book.zero_words_) {
        for (auto& c : w) c = static_cast<std::uint8_t>(rng.bit());
      }
      break;
    }
    case Provenance::Kind::Lfsr: {
      Lfsr reg(prov.taps, prov.initial_state);
      for (auto& w : book.zero_words_) {
        for (auto& c : w) c = static_cast<std::uint8_t>(reg.next_bit());
      }
      break;
    }
  }
  return book;
}

BitSeq Codebook::word(int position, int bit) const {
  if (position < 0 || position >= num_positions()) {
    throw std::out_of_range("codebook: position out of range");
  }
  BitSeq w = zero_words_[static_cast<std::size_t>(position)];
  if (bit) {
    for (auto& c : w) c = static_cast<std::uint8_t>(1 - c);
  }
  return w;
}

void Codebook::save(std::ostream& os) const {
  os << "spreadcpm-codebook v1\n";
  os << "rate_n = " << rate_n_ << "\n";
  os << "positions = " << num_positions() << "\n";
  switch (prov_.kind) {
    case Provenance::Kind::Repetition:
      os << "provenance = repetition\n";
      break;
    case Provenance::Kind::SeededPrng:
      os << "provenance = seeded-prng\n";
      os << "seed = " << prov_.seed << "\n";
      break;
    case Provenance::Kind::Lfsr: {
      os << "provenance = lfsr\n";
      os << "taps =";
      for (int t : prov_.taps) os << " " << t;
      os << "\n";
      os << "initial_state = " << prov_.initial_state << "\n";
      break;
    }
  }
}

Codebook Codebook::load(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "spreadcpm-codebook v1") {
    throw std::runtime_error("codebook: unrecognized header");
  }
  int rate_n = 0;
  int positions = 0;
  Provenance prov;
  bool have_kind = false;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    trim(key);
    trim(val);
    if (key == "rate_n") rate_n = std::stoi(val);
    else if (key == "positions") positions = std::stoi(val);
    else if (key == "provenance") {
      have_kind = true;
      if (val == "repetition") prov.kind = Provenance::Kind::Repetition;
      else if (val == "seeded-prng") prov.kind = Provenance::Kind::SeededPrng;
      else if (val == "lfsr") prov.kind = Provenance::Kind::Lfsr;
      else throw std::runtime_error("codebook: unknown provenance '" + val + "'");
    } else if (key == "seed") prov.seed = std::stoull(val);
    else if (key == "taps") {
      std::istringstream ts(val);
      int t;
      prov.taps.clear();
      while (ts >> t) prov.taps.push_back(t);
    } else if (key == "initial_state") {
      prov.initial_state = static_cast<std::uint32_t>(std::stoul(val));
    }
  }
  if (!have_kind || rate_n < 1 || positions < 1) {
    throw std::runtime_error("codebook: incomplete document");
  }
  return build(rate_n, positions, prov);
}

BitSeq encode(const BitSeq& bits, const Codebook& book) {
  if (bits.size() > static_cast<std::size_t>(book.num_positions())) {
    throw std::out_of_range("encode: message longer than codebook");
  }
  const int n = book.rate_n();
  BitSeq chips;
  chips.reserve(bits.size() * static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < bits.size(); ++k) {
    for (int j = 0; j < n; ++j) {
      chips.push_back(book.chip(static_cast<int>(k), bits[k], j));
    }
  }
  return chips;
}

BitSeq majority_decode(const BitSeq& chip_decisions, const Codebook& book) {
  const int n = book.rate_n();
  if (n % 2 == 0) {
    throw std::invalid_argument("majority_decode: rate_n must be odd (ties undefined)");
  }
  if (chip_decisions.size() % static_cast<std::size_t>(n) != 0) {
    throw std::out_of_range("majority_decode: chip count not a multiple of rate_n");
  }
  const auto num_bits = chip_decisions.size() / static_cast<std::size_t>(n);
  if (num_bits > static_cast<std::size_t>(book.num_positions())) {
    throw std::out_of_range("majority_decode: more words than codebook positions");
  }
  BitSeq bits(num_bits, 0);
  for (std::size_t k = 0; k < num_bits; ++k) {
    int agree0 = 0;
    for (int j = 0; j < n; ++j) {
      const auto c = chip_decisions[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
      if (c == book.chip(static_cast<int>(k), 0, j)) ++agree0;
    }
    bits[k] = (2 * agree0 > n) ? 0 : 1;
  }
  return bits;
}

double majority_error_prob(double p, int n, MajorityMethod method) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("majority_error_prob: p outside [0,1]");
  if (n < 1 || n % 2 == 0) throw std::domain_error("majority_error_prob: n must be odd >= 1");
  if (method == MajorityMethod::Asymptotic) {
    if (!(p < 0.5)) throw std::domain_error("majority_error_prob: asymptotic form needs p < 1/2");
    if (p == 0.0) return 0.0;
    const double sn = std::sqrt(static_cast<double>(n));
    const double num = std::pow(4.0 * p * (1.0 - p), 0.5 * (n + 1));
    const double den = std::sqrt(2.0 * 3.14159265358979323846) * ((1.0 - 2.0 * p) * sn + 1.0 / sn);
    return num / den;
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  // Binomial tail via log-gamma; stays finite for n up to ~1e4.
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  double sum = 0.0;
  for (int k = (n + 1) / 2; k <= n; ++k) {
    const double lc = lgn - std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(n - k) + 1.0);
    sum += std::exp(lc + k * lp + (n - k) * lq);
  }
  return std::min(sum, 1.0);
}

}  // namespace spreadcpm
