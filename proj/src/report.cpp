#include "spreadcpm/report.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spreadcpm {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string fmt_g9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

}  // namespace

IniConfig IniConfig::parse(const std::string& text) {
  IniConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::string section;
  while (std::getline(is, line)) {
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected key = value, got '" + line + "'");
    }
    cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

IniConfig IniConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool IniConfig::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return false;
  for (const auto& kv : it->second) {
    if (kv.first == key) return true;
  }
  return false;
}

std::string IniConfig::get(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  for (const auto& kv : it->second) {
    if (kv.first == key) return kv.second;
  }
  return fallback;
}

double IniConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  const std::string v = get(section, key);
  return v.empty() ? fallback : std::stod(v);
}

long IniConfig::get_long(const std::string& section, const std::string& key,
                         long fallback) const {
  const std::string v = get(section, key);
  return v.empty() ? fallback : std::stol(v);
}

void IniConfig::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  auto& kvs = sections_[section];
  for (auto& kv : kvs) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  kvs.emplace_back(key, value);
}

std::string IniConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [name, kvs] : sections_) {
    os << "[" << name << "]\n";
    for (const auto& kv : kvs) os << kv.first << " = " << kv.second << "\n";
  }
  return os.str();
}

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::string join_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt_g9(xs[i]);
  }
  return s;
}

}  // namespace

ExperimentSpec experiment_from_config(const IniConfig& ini) {
  ExperimentSpec spec;

  const std::string pulse = ini.get("modulation", "pulse", "gfsk");
  const double bt = ini.get_double("modulation", "bt", 0.3);
  if (pulse == "gfsk") spec.modulation.pulse = ShapingPulse::gfsk(bt);
  else if (pulse == "rectangular") spec.modulation.pulse = ShapingPulse::rectangular();
  else if (pulse == "raised-cosine") spec.modulation.pulse = ShapingPulse::raised_cosine();
  else throw std::runtime_error("config: unknown pulse '" + pulse + "'");
  spec.modulation.mod_index = ini.get_double("modulation", "h", 0.8);
  spec.modulation.samples_per_symbol =
      static_cast<int>(ini.get_long("modulation", "samples_per_symbol", 5));

  const std::string prov = ini.get("code", "provenance", "seeded-prng");
  if (prov == "repetition") spec.codebook = Provenance::repetition();
  else if (prov == "seeded-prng") {
    spec.codebook = Provenance::seeded(
        static_cast<std::uint64_t>(ini.get_long("code", "seed", 0x5eedc0de)));
  } else if (prov == "lfsr") {
    std::vector<int> taps;
    std::istringstream ts(ini.get("code", "taps", "8 6 5 4"));
    int t;
    while (ts >> t) taps.push_back(t);
    spec.codebook = Provenance::lfsr(
        taps, static_cast<std::uint32_t>(ini.get_long("code", "initial_state", 1)));
  } else {
    throw std::runtime_error("config: unknown provenance '" + prov + "'");
  }
  spec.rate_list.clear();
  for (double n : parse_list(ini.get("code", "rate_n", "10"))) {
    spec.rate_list.push_back(static_cast<int>(n));
  }

  spec.esn0_db_list = parse_list(ini.get("channel", "esn0_db", ""));
  spec.sigma2_list = parse_list(ini.get("channel", "sigma2", ""));
  if (spec.esn0_db_list.empty() && spec.sigma2_list.empty()) {
    spec.esn0_db_list = {0.0};
  }
  const std::string phase = ini.get("channel", "phase", "uniform");
  if (phase == "uniform") spec.phase_mode = PhaseMode::UniformRandom;
  else if (phase == "known") spec.phase_mode = PhaseMode::Known;
  else throw std::runtime_error("config: unknown phase mode '" + phase + "'");
  spec.theta = ini.get_double("channel", "theta", 0.0);
  spec.nbi.enabled = ini.get("channel", "nbi", "off") == "on";
  spec.nbi.symbol_rate = ini.get_double("channel", "nbi_symbol_rate", 5e-4);
  spec.nbi.band = ini.get_double("channel", "nbi_band", 0.5);
  spec.nbi.power = ini.get_double("channel", "nbi_power", -1.0);

  const std::string strat = ini.get("run", "demod", "noncoherent-block");
  const auto s = strategy_from_name(strat);
  if (!s) throw std::runtime_error("config: unknown demod strategy '" + strat + "'");
  spec.strategy = *s;
  spec.k_bits = static_cast<int>(ini.get_long("run", "k_bits", 5));
  spec.message_bits = static_cast<int>(ini.get_long("run", "message_bits", 200));
  spec.trials = ini.get_long("run", "trials", 100000);
  spec.master_seed = static_cast<std::uint64_t>(ini.get_long("run", "seed", 1));
  spec.threads = static_cast<int>(ini.get_long("run", "threads", 1));
  return spec;
}

IniConfig experiment_to_config(const ExperimentSpec& spec) {
  IniConfig ini;
  switch (spec.modulation.pulse.kind()) {
    case PulseKind::Gfsk:
      ini.set("modulation", "pulse", "gfsk");
      ini.set("modulation", "bt", fmt_g9(spec.modulation.pulse.bt()));
      break;
    case PulseKind::Rectangular:
      ini.set("modulation", "pulse", "rectangular");
      break;
    case PulseKind::RaisedCosine:
      ini.set("modulation", "pulse", "raised-cosine");
      break;
  }
  ini.set("modulation", "h", fmt_g9(spec.modulation.mod_index));
  ini.set("modulation", "samples_per_symbol", std::to_string(spec.modulation.samples_per_symbol));

  switch (spec.codebook.kind) {
    case Provenance::Kind::Repetition:
      ini.set("code", "provenance", "repetition");
      break;
    case Provenance::Kind::SeededPrng:
      ini.set("code", "provenance", "seeded-prng");
      ini.set("code", "seed", std::to_string(spec.codebook.seed));
      break;
    case Provenance::Kind::Lfsr: {
      ini.set("code", "provenance", "lfsr");
      std::string taps;
      for (std::size_t i = 0; i < spec.codebook.taps.size(); ++i) {
        if (i) taps += " ";
        taps += std::to_string(spec.codebook.taps[i]);
      }
      ini.set("code", "taps", taps);
      ini.set("code", "initial_state", std::to_string(spec.codebook.initial_state));
      break;
    }
  }
  std::vector<double> rates(spec.rate_list.begin(), spec.rate_list.end());
  ini.set("code", "rate_n", join_list(rates));

  if (!spec.esn0_db_list.empty()) ini.set("channel", "esn0_db", join_list(spec.esn0_db_list));
  if (!spec.sigma2_list.empty()) ini.set("channel", "sigma2", join_list(spec.sigma2_list));
  ini.set("channel", "phase", spec.phase_mode == PhaseMode::Known ? "known" : "uniform");
  ini.set("channel", "theta", fmt_g9(spec.theta));
  ini.set("channel", "nbi", spec.nbi.enabled ? "on" : "off");
  if (spec.nbi.enabled) {
    ini.set("channel", "nbi_symbol_rate", fmt_g9(spec.nbi.symbol_rate));
    ini.set("channel", "nbi_band", fmt_g9(spec.nbi.band));
    ini.set("channel", "nbi_power", fmt_g9(spec.nbi.power));
  }

  ini.set("run", "demod", strategy_name(spec.strategy));
  ini.set("run", "k_bits", std::to_string(spec.k_bits));
  ini.set("run", "message_bits", std::to_string(spec.message_bits));
  ini.set("run", "trials", std::to_string(spec.trials));
  ini.set("run", "seed", std::to_string(spec.master_seed));
  return ini;
}

std::uint64_t config_hash(const ExperimentSpec& spec) {
  const std::string text = experiment_to_config(spec).serialize();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ber_csv_string(const std::vector<BerPoint>& points) {
  std::ostringstream os;
  os << "rate_n,esn0_db,sigma2,strategy,trials,bits,errors,ber,std_err,seed\n";
  for (const auto& p : points) {
    os << p.rate_n << "," << fmt_g9(p.esn0_db) << "," << fmt_g9(p.sigma2) << ","
       << p.strategy << "," << p.estimate.trials << "," << p.estimate.bits << ","
       << p.estimate.bit_errors << "," << fmt_g9(p.estimate.ber) << ","
       << fmt_g9(p.estimate.std_err) << "," << p.estimate.seed << "\n";
  }
  return os.str();
}

void write_ber_csv(const std::string& path, const std::vector<BerPoint>& points) {
  if (points.empty()) throw std::invalid_argument("write_ber_csv: no results");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("write_ber_csv: cannot open " + tmp);
    f << ber_csv_string(points);
    if (!f) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write_ber_csv: write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("write_ber_csv: cannot move into place: " + path);
  }
}

std::vector<BerPoint> read_ber_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_ber_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("read_ber_csv: empty file");
  std::vector<BerPoint> out;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    std::istringstream is(line);
    std::string tok;
    BerPoint p;
    auto next = [&]() {
      if (!std::getline(is, tok, ',')) throw std::runtime_error("read_ber_csv: short row");
      return tok;
    };
    p.rate_n = std::stoi(next());
    p.esn0_db = std::stod(next());
    p.sigma2 = std::stod(next());
    p.strategy = next();
    p.estimate.trials = std::stol(next());
    p.estimate.bits = std::stol(next());
    p.estimate.bit_errors = std::stol(next());
    p.estimate.ber = std::stod(next());
    p.estimate.std_err = std::stod(next());
    p.estimate.seed = std::stoull(next());
    out.push_back(std::move(p));
  }
  return out;
}

void write_metadata(const std::string& path, const ExperimentSpec& spec,
                    double wall_time_seconds) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_metadata: cannot open " + path);
  f << "# spreadcpm run metadata v1\n";
  f << "code_version = 1.0\n";
  f << "config_hash = " << config_hash(spec) << "\n";
  f << "codebook = " << spec.codebook.describe() << "\n";
  f << "wall_time_s = " << fmt_g9(wall_time_seconds) << "\n";
  if (spec.nbi.enabled) {
    f << "nbi_power_rule = in-band white noise power over +/-"
      << fmt_g9(spec.nbi.band) << " cycles/symbol (4 sigma2 band)\n";
  }
  f << "\n" << experiment_to_config(spec).serialize();
}

void export_iq(const std::string& path, const ComplexSignal& sig,
               const std::string& sidecar_path, std::uint64_t cfg_hash) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("export_iq: cannot open " + path);
  auto put_f32 = [&](float v) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(v);
    char bytes[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                     static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
    f.write(bytes, 4);
  };
  for (const auto& s : sig.samples) {
    put_f32(static_cast<float>(s.real()));
    put_f32(static_cast<float>(s.imag()));
  }
  if (!f) throw std::runtime_error("export_iq: write failed for " + path);

  std::ofstream meta(sidecar_path, std::ios::binary);
  if (!meta) throw std::runtime_error("export_iq: cannot open " + sidecar_path);
  meta << "# spreadcpm iq sidecar v1\n";
  meta << "format = f32le interleaved\n";
  meta << "samples = " << sig.samples.size() << "\n";
  meta << "samples_per_symbol = " << fmt_g9(1.0 / sig.dt) << "\n";
  meta << "dt = " << fmt_g9(sig.dt) << "\n";
  meta << "t_start = " << fmt_g9(sig.t_start) << "\n";
  meta << "config_hash = " << cfg_hash << "\n";
}

ComplexSignal import_iq(const std::string& path, double dt, double t_start) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("import_iq: cannot open " + path);
  ComplexSignal sig;
  sig.dt = dt;
  sig.t_start = t_start;
  char bytes[8];
  while (f.read(bytes, 8)) {
    auto get_f32 = [&](int off) {
      std::uint32_t u = 0;
      for (int i = 3; i >= 0; --i) {
        u = (u << 8) | static_cast<unsigned char>(bytes[off + i]);
      }
      return std::bit_cast<float>(u);
    };
    sig.samples.emplace_back(get_f32(0), get_f32(4));
  }
  return sig;
}

}  // namespace spreadcpm
