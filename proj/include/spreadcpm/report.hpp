#pragma once

#include <map>
#include <string>
#include <vector>

#include "spreadcpm/experiment.hpp"
#include "spreadcpm/signal.hpp"

namespace spreadcpm {

// Minimal sectioned key/value config document:
//   [section]
//   key = value        ; '#' and ';' start comments
class IniConfig {
 public:
  static IniConfig parse(const std::string& text);
  static IniConfig load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  std::string serialize() const;

 private:
  // Section -> ordered key/value pairs.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

// Builds an experiment spec from a config document (sections [modulation],
// [code], [channel], [run]).
ExperimentSpec experiment_from_config(const IniConfig& ini);
IniConfig experiment_to_config(const ExperimentSpec& spec);

// FNV-1a over the canonical config text; pinned for sidecar metadata.
std::uint64_t config_hash(const ExperimentSpec& spec);

// CSV with a fixed header; all numerics at 9 significant digits, '.' decimal
// point, LF line endings. Written atomically (temp file + rename) so a
// failure leaves no partial output.
void write_ber_csv(const std::string& path, const std::vector<BerPoint>& points);
std::vector<BerPoint> read_ber_csv(const std::string& path);
std::string ber_csv_string(const std::vector<BerPoint>& points);

// Companion metadata: full spec echo, code version, codebook provenance,
// wall time. Not required to be byte-stable (timings live here, not in CSV).
void write_metadata(const std::string& path, const ExperimentSpec& spec,
                    double wall_time_seconds);

// Interleaved little-endian float32 I/Q with a sidecar text file carrying
// the sample rate and config hash.
void export_iq(const std::string& path, const ComplexSignal& sig,
               const std::string& sidecar_path, std::uint64_t cfg_hash);
ComplexSignal import_iq(const std::string& path, double dt, double t_start = 0.0);

}  // namespace spreadcpm
