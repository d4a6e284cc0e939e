#include "spreadcpm/experiment.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>

#include "spreadcpm/analytics.hpp"

namespace spreadcpm {

std::string strategy_name(DemodStrategy s) {
  switch (s) {
    case DemodStrategy::JointCoherent: return "joint-coherent";
    case DemodStrategy::JointNoncoherent: return "joint-noncoherent";
    case DemodStrategy::SeparateMajorityNoncoherent: return "separate-majority-nc";
    case DemodStrategy::SeparateMajorityCoherent: return "separate-majority-c";
    case DemodStrategy::NoncoherentBlock: return "noncoherent-block";
  }
  return "?";
}

std::optional<DemodStrategy> strategy_from_name(const std::string& name) {
  if (name == "joint-coherent") return DemodStrategy::JointCoherent;
  if (name == "joint-noncoherent") return DemodStrategy::JointNoncoherent;
  if (name == "separate-majority-nc") return DemodStrategy::SeparateMajorityNoncoherent;
  if (name == "separate-majority-c") return DemodStrategy::SeparateMajorityCoherent;
  if (name == "noncoherent-block") return DemodStrategy::NoncoherentBlock;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  modulation.validate();
  if (rate_list.empty()) throw std::invalid_argument("experiment: empty rate list");
  for (int n : rate_list) {
    if (n < 1) throw std::invalid_argument("experiment: rate_n must be >= 1");
  }
  if (esn0_db_list.empty() == sigma2_list.empty()) {
    throw std::invalid_argument("experiment: exactly one of esn0_db_list / sigma2_list must be set");
  }
  for (double s2 : sigma2_list) {
    if (s2 < 0.0) throw std::invalid_argument("experiment: sigma2 must be >= 0");
  }
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (message_bits < 1) throw std::invalid_argument("experiment: message_bits must be >= 1");
  if (strategy == DemodStrategy::NoncoherentBlock) {
    if (k_bits < 1 || k_bits % 2 == 0 || k_bits > 10) {
      throw std::invalid_argument("experiment: k_bits must be odd and <= 10");
    }
  }
  const bool coherent = strategy == DemodStrategy::JointCoherent ||
                        strategy == DemodStrategy::SeparateMajorityCoherent;
  if (coherent && phase_mode == PhaseMode::UniformRandom) {
    throw std::invalid_argument("experiment: coherent strategies require known phase");
  }
  if (nbi.enabled && !(nbi.band > 0.0 && nbi.symbol_rate > 0.0)) {
    throw std::invalid_argument("experiment: bad NBI descriptor");
  }
}

namespace {

// Per-point immutable context shared by all trials.
struct PointContext {
  const ExperimentSpec* spec = nullptr;
  const CpmModulator* mod = nullptr;
  const Codebook* book = nullptr;
  const BlockDemodulator* block = nullptr;                 // NoncoherentBlock
  const std::vector<std::array<ComplexSignal, 2>>* joint = nullptr;  // per-position pair
  const std::array<ComplexSignal, 2>* chip = nullptr;      // bare chip pair
  double sigma2 = 0.0;
  std::optional<NbiConfig> nbi;
  std::size_t point_index = 0;
};

// Decode one bit's worth of chips against the stored word with agreement
// counting; even rates resolve exact N/2 ties with a dedicated coin flip.
int decode_word_with_ties(const BitSeq& decisions, std::size_t offset, const Codebook& book,
                          int position, RngStream& tie_rng) {
  const int n = book.rate_n();
  int agree0 = 0;
  for (int j = 0; j < n; ++j) {
    if (decisions[offset + static_cast<std::size_t>(j)] == book.chip(position, 0, j)) ++agree0;
  }
  if (2 * agree0 == n) return tie_rng.bit();
  return (2 * agree0 > n) ? 0 : 1;
}

long run_trial(const PointContext& ctx, long trial) {
  const ExperimentSpec& spec = *ctx.spec;
  const int M = spec.message_bits;
  const int n = ctx.book->rate_n();
  const double h = spec.modulation.mod_index;

  RngStream msg_rng(spec.master_seed, ctx.point_index, static_cast<std::uint64_t>(trial),
                    StreamPurpose::Message);
  RngStream phase_rng(spec.master_seed, ctx.point_index, static_cast<std::uint64_t>(trial),
                      StreamPurpose::Phase);
  RngStream noise_rng(spec.master_seed, ctx.point_index, static_cast<std::uint64_t>(trial),
                      StreamPurpose::Noise);
  RngStream tie_rng(spec.master_seed, ctx.point_index, static_cast<std::uint64_t>(trial),
                    StreamPurpose::TieBreak);

  BitSeq msg(static_cast<std::size_t>(M));
  for (auto& b : msg) b = static_cast<std::uint8_t>(msg_rng.bit());
  const BitSeq chips = encode(msg, *ctx.book);

  // Fast path: a one-bit message is exactly a banked codeword waveform.
  ComplexSignal tx;
  if (M == 1 && ctx.joint) {
    tx = (*ctx.joint)[0][msg[0]];
  } else {
    tx = ctx.mod->modulate(chips, 0.0);
  }

  ChannelConfig ch;
  ch.sigma2 = ctx.sigma2;
  ch.phase_mode = spec.phase_mode;
  ch.theta = spec.theta;
  auto [rx, theta_used] = apply_phase(tx, ch, phase_rng);
  if (ctx.nbi) {
    RngStream nbi_rng(spec.master_seed, ctx.point_index, static_cast<std::uint64_t>(trial),
                      StreamPurpose::NbiSymbols);
    rx = add_nbi_qpsk(rx, *ctx.nbi, nbi_rng);
  }
  rx = add_awgn(rx, ctx.sigma2, noise_rng);

  long errors = 0;
  switch (spec.strategy) {
    case DemodStrategy::JointCoherent:
    case DemodStrategy::JointNoncoherent: {
      const bool coherent = spec.strategy == DemodStrategy::JointCoherent;
      double prior = 0.0;  // accumulated phase of chips before the window, cycles
      for (int a = 0; a < M; ++a) {
        const ObservationWindow w{static_cast<double>(a) * n, static_cast<double>(a + 1) * n};
        const auto& pair = (*ctx.joint)[static_cast<std::size_t>(a)];
        int decided;
        if (coherent) {
          // Candidate rotated onto the received phase: the known theta plus
          // the accumulated phase of all chips before this window (genie).
          const cplx rot = std::polar(1.0, 6.283185307179586 * (theta_used + prior));
          double stat[2];
          for (int b = 0; b < 2; ++b) {
            stat[b] = std::real(inner_product(pair[static_cast<std::size_t>(b)], rx, w) * rot) -
                      0.5 * norm2(pair[static_cast<std::size_t>(b)], w);
          }
          decided = stat[1] > stat[0] ? 1 : (stat[0] > stat[1] ? 0 : tie_rng.bit());
        } else {
          double mag[2];
          for (int b = 0; b < 2; ++b) {
            mag[b] = std::abs(inner_product(pair[static_cast<std::size_t>(b)], rx, w));
          }
          decided = mag[1] > mag[0] ? 1 : (mag[0] > mag[1] ? 0 : tie_rng.bit());
        }
        if (decided != msg[static_cast<std::size_t>(a)]) ++errors;
        for (int j = 0; j < n; ++j) {
          prior += 0.5 * h * (chips[static_cast<std::size_t>(a * n + j)] ? 1.0 : -1.0);
        }
      }
      break;
    }
    case DemodStrategy::SeparateMajorityNoncoherent:
    case DemodStrategy::SeparateMajorityCoherent: {
      const bool coherent = spec.strategy == DemodStrategy::SeparateMajorityCoherent;
      const auto total_chips = chips.size();
      BitSeq decisions(total_chips);
      // The chip matched filters carry no history, while the transmitted
      // signal starts from the all-zeros default; its saturated contribution
      // is a constant -h/2 per history symbol that the coherent reference
      // must include.
      double prior = -0.5 * h * static_cast<double>(ctx.mod->default_history().size());
      for (std::size_t j = 0; j < total_chips; ++j) {
        const double t0 = static_cast<double>(j);
        const ObservationWindow w{t0, t0 + 1.0};
        int decided;
        if (coherent) {
          // Genie phase reference: all earlier chips assumed known, matching
          // the best-case framing of the separate-path analysis.
          const cplx rot = std::polar(1.0, 6.283185307179586 * (theta_used + prior));
          double stat[2];
          for (int b = 0; b < 2; ++b) {
            const ComplexSignal cand = (*ctx.chip)[static_cast<std::size_t>(b)].with_start(t0);
            stat[b] = std::real(inner_product(cand, rx, w) * rot) - 0.5 * norm2(cand, w);
          }
          decided = stat[1] > stat[0] ? 1 : (stat[0] > stat[1] ? 0 : tie_rng.bit());
        } else {
          double mag[2];
          for (int b = 0; b < 2; ++b) {
            const ComplexSignal cand = (*ctx.chip)[static_cast<std::size_t>(b)].with_start(t0);
            mag[b] = std::abs(inner_product(cand, rx, w));
          }
          decided = mag[1] > mag[0] ? 1 : (mag[0] > mag[1] ? 0 : tie_rng.bit());
        }
        decisions[j] = static_cast<std::uint8_t>(decided);
        prior += 0.5 * h * (chips[j] ? 1.0 : -1.0);
      }
      for (int a = 0; a < M; ++a) {
        const int bit = decode_word_with_ties(decisions, static_cast<std::size_t>(a) *
                                              static_cast<std::size_t>(n),
                                              *ctx.book, a, tie_rng);
        if (bit != msg[static_cast<std::size_t>(a)]) ++errors;
      }
      break;
    }
    case DemodStrategy::NoncoherentBlock: {
      for (int a = 0; a < M; ++a) {
        if (ctx.block->decide(rx, a, tie_rng) != msg[static_cast<std::size_t>(a)]) ++errors;
      }
      break;
    }
  }
  return errors;
}

long run_point(const PointContext& ctx) {
  const long trials = ctx.spec->trials;
  const int threads = std::max(1, ctx.spec->threads);
  if (threads == 1) {
    long errors = 0;
    for (long t = 0; t < trials; ++t) errors += run_trial(ctx, t);
    return errors;
  }
  // Fixed-size blocks pulled from an atomic counter; per-block integer sums
  // make the total independent of scheduling.
  constexpr long kBlock = 256;
  const long num_blocks = (trials + kBlock - 1) / kBlock;
  std::vector<long> block_errors(static_cast<std::size_t>(num_blocks), 0);
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long blk = next.fetch_add(1);
      if (blk >= num_blocks) return;
      long acc = 0;
      const long lo = blk * kBlock;
      const long hi = std::min(trials, lo + kBlock);
      for (long t = lo; t < hi; ++t) acc += run_trial(ctx, t);
      block_errors[static_cast<std::size_t>(blk)] = acc;
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  long errors = 0;
  for (long e : block_errors) errors += e;
  return errors;
}

}  // namespace

std::vector<BerPoint> run_ber_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const CpmModulator mod(spec.modulation);
  const double c = single_symbol_distance(spec.modulation);

  double nbi_freq = 0.0;
  if (spec.nbi.enabled) {
    RngStream freq_rng(spec.master_seed, 0, 0, StreamPurpose::NbiFreq);
    nbi_freq = draw_nbi_freq(spec.nbi.band, freq_rng);
  }

  const bool use_sigma = !spec.sigma2_list.empty();
  const auto& noise_grid = use_sigma ? spec.sigma2_list : spec.esn0_db_list;

  std::vector<BerPoint> out;
  out.reserve(spec.rate_list.size() * noise_grid.size());
  std::size_t point_index = 0;

  for (int rate : spec.rate_list) {
    const Codebook book = Codebook::build(rate, spec.message_bits, spec.codebook);

    // Strategy machinery reused across noise points for this rate.
    std::unique_ptr<BlockDemodulator> block;
    std::vector<std::array<ComplexSignal, 2>> joint;
    std::array<ComplexSignal, 2> chip;
    switch (spec.strategy) {
      case DemodStrategy::NoncoherentBlock:
        block = std::make_unique<BlockDemodulator>(spec.modulation, book, spec.k_bits,
                                                   spec.message_bits);
        break;
      case DemodStrategy::JointCoherent:
      case DemodStrategy::JointNoncoherent:
        joint.resize(static_cast<std::size_t>(spec.message_bits));
        for (int a = 0; a < spec.message_bits; ++a) {
          for (int b = 0; b < 2; ++b) {
            joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                mod.modulate(book.word(a, b), 0.0).with_start(static_cast<double>(a) * rate);
          }
        }
        break;
      case DemodStrategy::SeparateMajorityNoncoherent:
      case DemodStrategy::SeparateMajorityCoherent:
        // Bare single-chip matched filters, identical at every position.
        for (int b = 0; b < 2; ++b) {
          chip[static_cast<std::size_t>(b)] =
              mod.modulate(BitSeq{static_cast<std::uint8_t>(b)}, 0.0, BitSeq{});
        }
        break;
    }

    for (double g : noise_grid) {
      PointContext ctx;
      ctx.spec = &spec;
      ctx.mod = &mod;
      ctx.book = &book;
      ctx.block = block.get();
      ctx.joint = joint.empty() ? nullptr : &joint;
      ctx.chip = &chip;
      ctx.point_index = point_index;
      BerPoint pt;
      pt.rate_n = rate;
      pt.strategy = strategy_name(spec.strategy);
      if (use_sigma) {
        ctx.sigma2 = g;
        pt.sigma2 = g;
        pt.esn0_db = g > 0.0 ? 10.0 * std::log10(sigma_to_esn0(std::sqrt(g), c))
                             : std::numeric_limits<double>::infinity();
      } else {
        const double sigma = esn0_to_sigma(std::pow(10.0, g / 10.0), c);
        ctx.sigma2 = sigma * sigma;
        pt.sigma2 = ctx.sigma2;
        pt.esn0_db = g;
      }
      if (spec.nbi.enabled) {
        NbiConfig nbi;
        nbi.symbol_rate = spec.nbi.symbol_rate;
        nbi.freq_offset = nbi_freq;
        // "Same power as an equivalent level of white noise": in-band power
        // of the white noise over the main lobe [-band, band], PSD 2 sigma^2.
        nbi.power = spec.nbi.power >= 0.0 ? spec.nbi.power : 4.0 * ctx.sigma2 * spec.nbi.band;
        ctx.nbi = nbi;
        pt.nbi_freq = nbi.freq_offset;
        pt.nbi_power = nbi.power;
      }
      const long errors = run_point(ctx);
      pt.estimate = BerEstimate::from_counts(
          spec.trials, spec.trials * static_cast<long>(spec.message_bits), errors,
          spec.master_seed);
      out.push_back(std::move(pt));
      ++point_index;
    }
  }
  return out;
}

}  // namespace spreadcpm
