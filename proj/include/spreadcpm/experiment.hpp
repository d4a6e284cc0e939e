#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spreadcpm/ber.hpp"
#include "spreadcpm/channel.hpp"
#include "spreadcpm/classify.hpp"
#include "spreadcpm/codebook.hpp"
#include "spreadcpm/cpm.hpp"

namespace spreadcpm {

enum class DemodStrategy {
  JointCoherent,
  JointNoncoherent,
  SeparateMajorityNoncoherent,
  SeparateMajorityCoherent,
  NoncoherentBlock,
};

std::string strategy_name(DemodStrategy s);
std::optional<DemodStrategy> strategy_from_name(const std::string& name);

struct NbiSpec {
  bool enabled = false;
  double symbol_rate = 5e-4;     // interferer symbols per CPM symbol
  double band = 0.5;             // random frequency drawn from [-band, band]
  double power = -1.0;           // < 0: match in-band white noise power 4 sigma^2 band
};

// A BER experiment is fully determined by this spec plus master_seed. Every
// random quantity is drawn from counter-derived streams, so reruns and any
// thread count give identical results.
struct ExperimentSpec {
  CpmConfig modulation;
  Provenance codebook = Provenance::seeded(0x5eedc0de);
  std::vector<int> rate_list = {10};
  std::vector<double> esn0_db_list;   // either this...
  std::vector<double> sigma2_list;    // ...or direct noise powers
  PhaseMode phase_mode = PhaseMode::UniformRandom;
  double theta = 0.0;                 // Known-phase value (cycles)
  NbiSpec nbi;
  DemodStrategy strategy = DemodStrategy::NoncoherentBlock;
  int k_bits = 5;                     // NoncoherentBlock window
  int message_bits = 200;
  long trials = 100000;
  std::uint64_t master_seed = 1;
  int threads = 1;

  void validate() const;
};

struct BerPoint {
  int rate_n = 0;
  double esn0_db = 0.0;
  double sigma2 = 0.0;
  std::string strategy;
  double nbi_freq = 0.0;
  double nbi_power = 0.0;
  BerEstimate estimate;
};

// Runs the full sweep: one row per (rate, noise) grid point. Single-symbol
// distance C ties Es/N0 to sigma via Es/N0 = C^2 / (4 sigma^2).
std::vector<BerPoint> run_ber_experiment(const ExperimentSpec& spec);

}  // namespace spreadcpm
