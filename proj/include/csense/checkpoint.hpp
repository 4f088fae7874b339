#pragma once

// Model checkpoint container: versioned magic header, JSON metadata block
// (architecture, shapes, normalization stats), raw float32 parameter data in
// layer order, and an optional optimizer-state blob.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "csense/models.hpp"

#include <json.hpp>

namespace csense::models {

inline constexpr char kCheckpointMagic[8] = {'C', 'S', 'N', 'C',
                                             'K', 'P', 'T', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void save_checkpoint(Model& model, const std::string& path,
                            const std::string& optimizer_kind = "none",
                            const std::string& optimizer_blob = {}) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
  os.write(kCheckpointMagic, sizeof kCheckpointMagic);
  const std::uint32_t version = kCheckpointVersion;
  os.write(reinterpret_cast<const char*>(&version), sizeof version);

  nlohmann::json meta;
  meta["family"] = family_name(model.spec.family);
  meta["width"] = model.spec.width;
  meta["classes"] = model.spec.classes;
  meta["vgg_weight_layers"] = model.spec.vgg_weight_layers;
  meta["fc_hidden"] = model.spec.fc_hidden;
  meta["class_base"] = model.spec.class_base;
  meta["norm_mu"] = model.stats.mu;
  meta["norm_sigma"] = model.stats.sigma;
  meta["optimizer"] = optimizer_kind;
  auto params = model.net.params();
  for (auto& p : params) {
    nlohmann::json pj;
    pj["name"] = p.name;
    pj["shape"] = p.value->shape;
    meta["params"].push_back(pj);
  }
  const std::string meta_str = meta.dump();
  detail::write_u64(os, meta_str.size());
  os.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));

  for (auto& p : params) {
    detail::write_u64(os, p.value->numel());
    os.write(reinterpret_cast<const char*>(p.value->data.data()),
             static_cast<std::streamsize>(p.value->numel() * sizeof(float)));
  }
  detail::write_u64(os, optimizer_blob.size());
  os.write(optimizer_blob.data(),
           static_cast<std::streamsize>(optimizer_blob.size()));
  if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

struct LoadedCheckpoint {
  Model model;
  std::string optimizer_kind;
  std::string optimizer_blob;
};

inline LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw std::runtime_error("load_checkpoint: " + path +
                             " is not a checkpoint file");
  std::uint32_t version = 0;
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  if (version != kCheckpointVersion)
    throw std::runtime_error("load_checkpoint: unsupported version " +
                             std::to_string(version));

  const std::uint64_t meta_len = detail::read_u64(is);
  std::string meta_str(meta_len, '\0');
  is.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
  if (!is) throw std::runtime_error("load_checkpoint: truncated metadata");
  const auto meta = nlohmann::json::parse(meta_str);

  ModelSpec spec;
  spec.family = family_from_name(meta.at("family").get<std::string>());
  spec.width = meta.at("width").get<std::size_t>();
  spec.classes = meta.at("classes").get<std::size_t>();
  spec.vgg_weight_layers = meta.at("vgg_weight_layers").get<int>();
  spec.fc_hidden = meta.at("fc_hidden").get<std::size_t>();
  spec.class_base = meta.at("class_base").get<int>();

  LoadedCheckpoint out{build_model(spec, 0), meta.at("optimizer").get<std::string>(), {}};
  out.model.stats.mu = meta.at("norm_mu").get<double>();
  out.model.stats.sigma = meta.at("norm_sigma").get<double>();

  auto params = out.model.net.params();
  const auto& manifest = meta.at("params");
  if (manifest.size() != params.size())
    throw std::runtime_error("load_checkpoint: parameter manifest mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto shape = manifest[i].at("shape").get<std::vector<std::size_t>>();
    if (shape != params[i].value->shape)
      throw std::runtime_error("load_checkpoint: shape mismatch for " +
                               params[i].name);
    const std::uint64_t n = detail::read_u64(is);
    if (n != params[i].value->numel())
      throw std::runtime_error("load_checkpoint: data length mismatch for " +
                               params[i].name);
    is.read(reinterpret_cast<char*>(params[i].value->data.data()),
            static_cast<std::streamsize>(n * sizeof(float)));
  }
  const std::uint64_t blob_len = detail::read_u64(is);
  out.optimizer_blob.resize(blob_len);
  is.read(out.optimizer_blob.data(), static_cast<std::streamsize>(blob_len));
  if (!is) throw std::runtime_error("load_checkpoint: truncated parameters");
  return out;
}

}  // namespace csense::models
