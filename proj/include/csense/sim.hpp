#pragma once

// Synthetic energy-trace generator. During the LTE-U OFF window the channel
// is modeled per sample (192 Hz) as a two-state busy/idle Markov chain whose
// stationary busy fraction grows with the number of co-channel Wi-Fi APs.
// A busy sample carries the received power of the AP that won contention for
// that burst (path loss by distance/sight, slow AR(1) shadowing, bounded fast
// fading); beacon pulses are injected on a fixed 102.4 ms schedule regardless
// of contention. Sources combine with the noise floor in mW.
//
// Calibration targets: one-AP activity stays inside [-48,-24] dBm and two-AP
// activity inside [-55,-20] dBm, classes overlap heavily sample-by-sample,
// and per-class trace means increase with AP count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csense/rng.hpp"

namespace csense::sim {

enum class Sight { LOS, NLOS };
enum class Traffic { FullBuffer };

struct Placement {
  double distance_ft = 6.0;
  Sight sight = Sight::LOS;
};

struct ScenarioConfig {
  int ap_count = 1;
  std::vector<Placement> placements;
  double duration_s = 60.0;
  double sample_rate = 192.0;
  std::uint64_t seed = 0;
  Traffic traffic = Traffic::FullBuffer;

  std::size_t sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  }

  void validate() const {
    if (ap_count < 0 || ap_count > 2)
      throw std::invalid_argument("scenario: ap_count must be 0, 1 or 2, got " +
                                  std::to_string(ap_count));
    if (placements.size() != static_cast<std::size_t>(ap_count))
      throw std::invalid_argument(
          "scenario: " + std::to_string(placements.size()) +
          " placements for ap_count " + std::to_string(ap_count));
    if (!(duration_s > 0.0))
      throw std::invalid_argument("scenario: duration must be positive, got " +
                                  std::to_string(duration_s));
    if (!(sample_rate > 0.0))
      throw std::invalid_argument("scenario: sample_rate must be positive");
    if (sample_count() < 1)
      throw std::invalid_argument("scenario: duration*sample_rate below 1");
    for (const auto& p : placements)
      if (!(p.distance_ft > 0.0))
        throw std::invalid_argument("scenario: AP distance must be positive");
  }
};

inline std::vector<Placement> default_placements(int ap_count) {
  return std::vector<Placement>(static_cast<std::size_t>(ap_count),
                                Placement{6.0, Sight::LOS});
}

inline ScenarioConfig make_scenario(int ap_count, double duration_s,
                                    std::uint64_t seed,
                                    double sample_rate = 192.0) {
  ScenarioConfig cfg;
  cfg.ap_count = ap_count;
  cfg.placements = default_placements(ap_count);
  cfg.duration_s = duration_s;
  cfg.sample_rate = sample_rate;
  cfg.seed = seed;
  return cfg;
}

struct EnergyTrace {
  std::vector<double> values;  // dBm, in [-100, 0], quantized to 1e-6
  double sample_rate = 192.0;
  int label = 0;  // = ap_count
  ScenarioConfig scenario;
};

// Calibration constants (synthetic stand-in for the testbed environment).
struct Calibration {
  double noise_floor_dbm = -95.0;
  double noise_jitter_db = 2.0;
  double ref_level_dbm = -35.5;  // received power at 6 ft LOS
  double ref_distance_ft = 6.0;
  double path_loss_exponent = 2.0;
  double nlos_penalty_db = 8.0;
  double fast_fade_db = 1.1;
  double fade_clip_sigma = 3.0;
  double shadow_db = 3.0;
  double shadow_clip_db = 7.5;
  double shadow_corr_samples = 384.0;
  double beacon_interval_s = 0.1024;
  double stay_busy = 0.35;                    // mean busy burst ~1.5 samples
  double busy_fraction[3] = {0.0, 0.155, 0.235};  // chain stationary, by APs
};

inline const Calibration& calibration() {
  static const Calibration c{};
  return c;
}

inline double mean_level_dbm(const Placement& p,
                             const Calibration& cal = calibration()) {
  double lvl = cal.ref_level_dbm -
               10.0 * cal.path_loss_exponent *
                   std::log10(p.distance_ft / cal.ref_distance_ft);
  if (p.sight == Sight::NLOS) lvl -= cal.nlos_penalty_db;
  return lvl;
}

// --- channel occupancy -----------------------------------------------------

struct OccupancyParams {
  double stay_busy = 0.0;   // P(busy -> busy)
  double enter_busy = 0.0;  // P(idle -> busy)
};

inline OccupancyParams occupancy_params(int ap_count,
                                        const Calibration& cal = calibration()) {
  if (ap_count < 0 || ap_count > 2)
    throw std::invalid_argument("occupancy: ap_count must be 0, 1 or 2");
  const double pi = cal.busy_fraction[ap_count];
  OccupancyParams p;
  p.stay_busy = cal.stay_busy;
  // stationary pi = q / (q + 1 - a)  =>  q = pi*(1-a)/(1-pi)
  p.enter_busy = pi * (1.0 - cal.stay_busy) / (1.0 - pi);
  return p;
}

inline double stationary_busy_fraction(int ap_count) {
  const auto p = occupancy_params(ap_count);
  if (p.enter_busy == 0.0) return 0.0;
  return p.enter_busy / (p.enter_busy + 1.0 - p.stay_busy);
}

// Two-state busy/idle chain stepped once per sample.
class OccupancyModel {
 public:
  explicit OccupancyModel(int ap_count) : params_(occupancy_params(ap_count)) {}

  struct Step {
    bool busy;
    bool burst_start;
  };

  Step step(rng::Xoshiro256ss& rng) {
    const double u = rng.uniform01();
    const bool next = busy_ ? u < params_.stay_busy : u < params_.enter_busy;
    const bool start = next && !busy_;
    busy_ = next;
    return {next, start};
  }

  bool busy() const { return busy_; }
  const OccupancyParams& params() const { return params_; }

 private:
  OccupancyParams params_;
  bool busy_ = false;
};

// Beacon sample indices for one AP: floor((k + phase) * interval * rate),
// k = 1, 2, ... while below n_samples. phase staggers multiple APs.
inline std::vector<std::uint64_t> beacon_indices(double sample_rate,
                                                 std::uint64_t n_samples,
                                                 double phase = 0.0,
                                                 double interval_s = 0.1024) {
  std::vector<std::uint64_t> out;
  const double step = interval_s * sample_rate;
  for (std::uint64_t k = 1;; ++k) {
    const double pos = (static_cast<double>(k) + phase) * step;
    const auto idx = static_cast<std::uint64_t>(std::floor(pos));
    if (idx >= n_samples) break;
    out.push_back(idx);
  }
  return out;
}

// --- trace synthesis --------------------------------------------------------

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double quantize_dbm(double v) { return std::round(v * 1e6) / 1e6; }

inline EnergyTrace simulate_trace(const ScenarioConfig& cfg) {
  cfg.validate();
  const Calibration& cal = calibration();
  const std::size_t n = cfg.sample_count();
  const int aps = cfg.ap_count;

  rng::Xoshiro256ss rng(cfg.seed);
  OccupancyModel chain(aps);

  std::vector<double> level(static_cast<std::size_t>(aps));
  for (int a = 0; a < aps; ++a)
    level[static_cast<std::size_t>(a)] =
        mean_level_dbm(cfg.placements[static_cast<std::size_t>(a)], cal);

  // AR(1) shadowing per AP, hard-clamped so calibrated ranges hold.
  const double rho = std::exp(-1.0 / cal.shadow_corr_samples);
  const double innov = std::sqrt(1.0 - rho * rho) * cal.shadow_db;
  std::vector<double> shadow(static_cast<std::size_t>(aps));
  for (int a = 0; a < aps; ++a)
    shadow[static_cast<std::size_t>(a)] = std::clamp(
        rng.normal(0.0, cal.shadow_db), -cal.shadow_clip_db, cal.shadow_clip_db);

  std::vector<std::vector<std::uint64_t>> beacons;
  std::vector<std::size_t> beacon_pos(static_cast<std::size_t>(aps), 0);
  for (int a = 0; a < aps; ++a)
    beacons.push_back(beacon_indices(
        cfg.sample_rate, n, static_cast<double>(a) / std::max(1, aps),
        cal.beacon_interval_s));

  EnergyTrace trace;
  trace.values.resize(n);
  trace.sample_rate = cfg.sample_rate;
  trace.label = aps;
  trace.scenario = cfg;

  int winner = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double noise_dbm =
        cal.noise_floor_dbm +
        cal.noise_jitter_db * rng.normal_clipped(cal.fade_clip_sigma);

    const auto st = chain.step(rng);
    if (st.burst_start && aps > 0)
      winner = static_cast<int>(rng.below(static_cast<std::uint64_t>(aps)));

    for (int a = 0; a < aps; ++a)
      shadow[static_cast<std::size_t>(a)] = std::clamp(
          rho * shadow[static_cast<std::size_t>(a)] +
              innov * rng.normal_clipped(cal.fade_clip_sigma),
          -cal.shadow_clip_db, cal.shadow_clip_db);

    bool active[2] = {false, false};
    if (st.busy && aps > 0) active[winner] = true;
    for (int a = 0; a < aps; ++a) {
      auto& pos = beacon_pos[static_cast<std::size_t>(a)];
      const auto& idx = beacons[static_cast<std::size_t>(a)];
      while (pos < idx.size() && idx[pos] < i) ++pos;
      if (pos < idx.size() && idx[pos] == i) active[a] = true;
    }

    double strongest = -1e30;
    for (int a = 0; a < aps; ++a) {
      if (!active[a]) continue;
      const double fade =
          cal.fast_fade_db * rng.normal_clipped(cal.fade_clip_sigma);
      strongest = std::max(
          strongest, level[static_cast<std::size_t>(a)] +
                         shadow[static_cast<std::size_t>(a)] + fade);
    }

    double mw = dbm_to_mw(noise_dbm);
    if (strongest > -1e29) mw += dbm_to_mw(strongest);
    trace.values[i] =
        quantize_dbm(std::clamp(mw_to_dbm(mw), -100.0, 0.0));
  }
  return trace;
}

// --- trace file format ------------------------------------------------------
// Header line `# rate=<f>,label=<k>,seed=<s>`, then one dBm value per line
// with fixed 6-decimal formatting. Round-trips are byte-exact because the
// simulator already quantizes to 1e-6 dBm.

inline void write_trace(const EnergyTrace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_trace: cannot open " + path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "# rate=%g,label=%d,seed=%llu\n",
                trace.sample_rate, trace.label,
                static_cast<unsigned long long>(trace.scenario.seed));
  os << buf;
  for (double v : trace.values) {
    std::snprintf(buf, sizeof buf, "%.6f\n", v);
    os << buf;
  }
  if (!os) throw std::runtime_error("write_trace: write failed for " + path);
}

inline EnergyTrace read_trace(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_trace: cannot open " + path);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("read_trace: " + path + " is empty");
  double rate = 0.0;
  int label = 0;
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "# rate=%lf,label=%d,seed=%llu", &rate, &label,
                  &seed) != 3)
    throw std::runtime_error("read_trace: " + path + ":1: bad header '" +
                             line + "'");
  EnergyTrace trace;
  trace.sample_rate = rate;
  trace.label = label;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0')
      throw std::runtime_error("read_trace: " + path + ":" +
                               std::to_string(lineno) + ": bad value '" +
                               line + "'");
    trace.values.push_back(v);
  }
  trace.scenario.ap_count = label;
  trace.scenario.placements = default_placements(label);
  trace.scenario.sample_rate = rate;
  trace.scenario.duration_s =
      static_cast<double>(trace.values.size()) / rate;
  trace.scenario.seed = seed;
  return trace;
}

}  // namespace csense::sim
