#pragma once

// Trace -> dataset pipeline: overlapping fixed-width chunks (stride w/4),
// seeded shuffle, 50/50 train/test split, outlier clamping and z-score
// normalization with statistics taken from the train half only. Files follow
// the UCR archive layout (label, then w values per line).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "csense/rng.hpp"
#include "csense/sim.hpp"

#include <json.hpp>

namespace csense::data {

struct Chunk {
  std::vector<double> values;
  int label = 0;
};

struct NormStats {
  double mu = 0.0;
  double sigma = 1.0;
};

struct Dataset {
  std::vector<Chunk> train;
  std::vector<Chunk> test;
  std::size_t k = 0;
  std::size_t w = 0;
  NormStats stats;
  std::uint64_t seed = 0;
  std::size_t clamped_values = 0;  // outliers replaced across both halves
};

inline std::size_t chunk_stride(std::size_t w) { return w >= 4 ? w / 4 : 1; }

struct Window {
  std::size_t offset = 0;
  std::vector<double> values;
};

// Windows start at offsets 0, w/4, 2w/4, ...; trailing samples that do not
// fill a window are dropped.
inline std::vector<Window> chunk_trace(const std::vector<double>& values,
                                       std::size_t w) {
  if (w < 1) throw std::invalid_argument("chunk_trace: width must be >= 1");
  if (w >= 4 && w % 4 != 0)
    throw std::invalid_argument("chunk_trace: width " + std::to_string(w) +
                                " not divisible by 4");
  if (values.size() < w)
    throw std::invalid_argument("chunk_trace: trace length " +
                                std::to_string(values.size()) +
                                " shorter than width " + std::to_string(w));
  const std::size_t stride = chunk_stride(w);
  const std::size_t count = (values.size() - w) / stride + 1;
  std::vector<Window> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    Window win;
    win.offset = c * stride;
    win.values.assign(values.begin() + static_cast<std::ptrdiff_t>(win.offset),
                      values.begin() +
                          static_cast<std::ptrdiff_t>(win.offset + w));
    out.push_back(std::move(win));
  }
  return out;
}

inline std::vector<Window> chunk_trace(const sim::EnergyTrace& trace,
                                       std::size_t w) {
  return chunk_trace(trace.values, w);
}

// Replaces values deviating from mu by more than 4 sigma with mu itself.
inline std::vector<double> clamp_outliers(const std::vector<double>& values,
                                          const NormStats& stats,
                                          std::size_t* replaced = nullptr) {
  if (!(stats.sigma > 0.0))
    throw std::invalid_argument("clamp_outliers: sigma must be positive");
  std::vector<double> out = values;
  std::size_t n = 0;
  for (double& v : out)
    if (std::abs(v - stats.mu) > 4.0 * stats.sigma) {
      v = stats.mu;
      ++n;
    }
  if (replaced) *replaced += n;
  return out;
}

// Mean and population (divisor n) standard deviation of the pooled values.
inline NormStats compute_norm_stats(const std::vector<double>& values) {
  if (values.size() < 2)
    throw std::invalid_argument("norm stats: need at least 2 values, got " +
                                std::to_string(values.size()));
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mu = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mu) * (v - mu);
  const double sigma = std::sqrt(sq / static_cast<double>(values.size()));
  if (sigma < 1e-12 * std::max(1.0, std::abs(mu)))
    throw std::invalid_argument("norm stats: zero variance in input");
  return {mu, sigma};
}

inline NormStats compute_norm_stats(const std::vector<Chunk>& chunks) {
  std::vector<double> pooled;
  for (const auto& c : chunks)
    pooled.insert(pooled.end(), c.values.begin(), c.values.end());
  return compute_norm_stats(pooled);
}

inline std::vector<double> normalize(const std::vector<double>& values,
                                     const NormStats& stats) {
  std::vector<double> out = values;
  for (double& v : out) v = (v - stats.mu) / stats.sigma;
  return out;
}

inline std::vector<double> denormalize(const std::vector<double>& values,
                                       const NormStats& stats) {
  std::vector<double> out = values;
  for (double& v : out) v = v * stats.sigma + stats.mu;
  return out;
}

// Full pipeline. Chunks never mix samples from different traces; the shuffle
// consumes traces in input order so the result is a pure function of
// (traces, w, k, seed).
inline Dataset build_dataset(const std::vector<sim::EnergyTrace>& traces,
                             std::size_t w, std::size_t k,
                             std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("build_dataset: need at least 2 classes");
  if (traces.empty()) throw std::invalid_argument("build_dataset: no traces");

  std::set<int> seen;
  for (const auto& t : traces) {
    if (t.label < 0 || static_cast<std::size_t>(t.label) >= k)
      throw std::invalid_argument("build_dataset: trace label " +
                                  std::to_string(t.label) + " outside [0," +
                                  std::to_string(k) + ")");
    seen.insert(t.label);
  }
  for (std::size_t c = 0; c < k; ++c)
    if (!seen.count(static_cast<int>(c)))
      throw std::invalid_argument("build_dataset: class " + std::to_string(c) +
                                  " absent from input traces");

  std::vector<Chunk> pool;
  for (const auto& t : traces)
    for (auto& win : chunk_trace(t, w))
      pool.push_back({std::move(win.values), t.label});

  rng::Xoshiro256ss rng(seed);
  rng.shuffle(pool);

  Dataset ds;
  ds.k = k;
  ds.w = w;
  ds.seed = seed;
  const std::size_t train_n = (pool.size() + 1) / 2;  // odd leftover -> train
  ds.train.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(train_n));
  ds.test.assign(pool.begin() + static_cast<std::ptrdiff_t>(train_n), pool.end());

  ds.stats = compute_norm_stats(ds.train);
  for (auto* half : {&ds.train, &ds.test})
    for (auto& chunk : *half)
      chunk.values = normalize(
          clamp_outliers(chunk.values, ds.stats, &ds.clamped_values), ds.stats);

  for (const auto* half : {&ds.train, &ds.test}) {
    std::set<int> present;
    for (const auto& c : *half) present.insert(c.label);
    if (present.size() != k)
      throw std::invalid_argument(
          "build_dataset: a class is missing from one half after the split");
  }
  return ds;
}

// --- UCR-style files ---------------------------------------------------------
// <name>_TRAIN / <name>_TEST: one chunk per line, integer label first, then
// exactly w values with 17 significant digits (value-exact round trip).
// <name>_META: JSON sidecar with w, k, mu, sigma, seed.

namespace detail {

inline void write_half(const std::vector<Chunk>& chunks,
                       const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_dataset: cannot open " + path);
  char buf[40];
  for (const auto& c : chunks) {
    os << c.label;
    for (double v : c.values) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write_dataset: write failed for " + path);
}

inline std::vector<Chunk> read_half(const std::string& path, std::size_t w,
                                    std::size_t k) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_dataset: cannot open " + path);
  std::vector<Chunk> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    Chunk chunk;
    const char* p = line.c_str();
    char* end = nullptr;
    const long label = std::strtol(p, &end, 10);
    if (end == p || label < 0 || static_cast<std::size_t>(label) >= k)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad label field");
    chunk.label = static_cast<int>(label);
    p = end;
    while (*p == ',') {
      ++p;
      const double v = std::strtod(p, &end);
      if (end == p)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad numeric field");
      chunk.values.push_back(v);
      p = end;
    }
    if (*p != '\0')
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": trailing garbage '" + std::string(p) + "'");
    if (chunk.values.size() != w)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(w + 1) +
                               " fields, got " +
                               std::to_string(chunk.values.size() + 1));
    out.push_back(std::move(chunk));
  }
  return out;
}

}  // namespace detail

inline void write_dataset(const Dataset& ds, const std::string& name) {
  detail::write_half(ds.train, name + "_TRAIN");
  detail::write_half(ds.test, name + "_TEST");
  nlohmann::json meta = {{"w", ds.w},
                         {"k", ds.k},
                         {"mu", ds.stats.mu},
                         {"sigma", ds.stats.sigma},
                         {"seed", ds.seed}};
  std::ofstream os(name + "_META");
  if (!os) throw std::runtime_error("write_dataset: cannot open " + name + "_META");
  os << meta.dump(2) << '\n';
}

inline Dataset read_dataset(const std::string& name) {
  std::ifstream ms(name + "_META");
  if (!ms) throw std::runtime_error("read_dataset: cannot open " + name + "_META");
  nlohmann::json meta;
  try {
    ms >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("read_dataset: bad metadata in " + name +
                             "_META: " + e.what());
  }
  Dataset ds;
  ds.w = meta.at("w").get<std::size_t>();
  ds.k = meta.at("k").get<std::size_t>();
  ds.stats.mu = meta.at("mu").get<double>();
  ds.stats.sigma = meta.at("sigma").get<double>();
  ds.seed = meta.at("seed").get<std::uint64_t>();
  ds.train = detail::read_half(name + "_TRAIN", ds.w, ds.k);
  ds.test = detail::read_half(name + "_TEST", ds.w, ds.k);
  return ds;
}

}  // namespace csense::data
