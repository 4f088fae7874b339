#pragma once

// The three classifier families and their training/evaluation loops.
//   FCN:   3 x (conv -> batchnorm -> relu) with (128,8), (256,5), (128,3),
//          then global average pooling and a linear head.
//   FC2:   two linear layers around one ReLU, hidden width 128.
//   VGG1D: stacked 3-wide convs, each followed by ReLU and a length-halving
//          max pool, ending in two fully connected layers.

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "csense/dataprep.hpp"
#include "csense/layers.hpp"
#include "csense/loss.hpp"
#include "csense/optim.hpp"
#include "csense/rng.hpp"

namespace csense::models {

enum class Family { FC2, VGG1D, FCN };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::FC2: return "fc2";
    case Family::VGG1D: return "vgg1d";
    case Family::FCN: return "fcn";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "fc2") return Family::FC2;
  if (s == "vgg1d") return Family::VGG1D;
  if (s == "fcn") return Family::FCN;
  throw std::invalid_argument("unknown model family '" + s + "'");
}

struct ModelSpec {
  Family family = Family::FCN;
  std::size_t width = 512;
  std::size_t classes = 2;
  int vgg_weight_layers = 6;  // studied set: 4, 5, 6, 7
  std::size_t fc_hidden = 128;
  // Model class c corresponds to ap_count c + class_base (1 when the dataset
  // holds only the one- and two-AP scenarios).
  int class_base = 0;

  void validate() const {
    if (width < 1) throw std::invalid_argument("model: width must be >= 1");
    if (classes < 2) throw std::invalid_argument("model: need >= 2 classes");
    if (family == Family::VGG1D &&
        (vgg_weight_layers < 4 || vgg_weight_layers > 7))
      throw std::invalid_argument("model: vgg weight layers must be in 4..7");
    if (fc_hidden < 1) throw std::invalid_argument("model: fc_hidden >= 1");
  }
};

struct Model {
  ModelSpec spec;
  nn::Sequential<float> net;
  data::NormStats stats;  // of the training dataset, set by the pipeline
};

inline Model build_model(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model m;
  m.spec = spec;
  auto& net = m.net;
  const std::size_t k = spec.classes;

  switch (spec.family) {
    case Family::FCN: {
      auto* c1 = net.emplace<nn::Conv1d<float>>(1, 128, 8, nn::Padding::Same);
      c1->set_needs_input_grad(false);
      net.emplace<nn::BatchNorm1d<float>>(128);
      net.emplace<nn::Relu<float>>();
      net.emplace<nn::Conv1d<float>>(128, 256, 5, nn::Padding::Same);
      net.emplace<nn::BatchNorm1d<float>>(256);
      net.emplace<nn::Relu<float>>();
      net.emplace<nn::Conv1d<float>>(256, 128, 3, nn::Padding::Same);
      net.emplace<nn::BatchNorm1d<float>>(128);
      net.emplace<nn::Relu<float>>();
      net.emplace<nn::GlobalAvgPool<float>>();
      net.emplace<nn::Linear<float>>(128, k);
      break;
    }
    case Family::FC2: {
      net.emplace<nn::Flatten<float>>();
      net.emplace<nn::Linear<float>>(spec.width, spec.fc_hidden);
      net.emplace<nn::Relu<float>>();
      net.emplace<nn::Linear<float>>(spec.fc_hidden, k);
      break;
    }
    case Family::VGG1D: {
      const int convs = spec.vgg_weight_layers - 2;
      std::size_t length = spec.width;
      std::size_t channels = 1;
      std::size_t out_ch = 64;
      for (int i = 0; i < convs; ++i) {
        if (length < 2)
          throw std::invalid_argument(
              "model: width " + std::to_string(spec.width) +
              " too short for " + std::to_string(convs) + " vgg pool stages");
        auto* conv =
            net.emplace<nn::Conv1d<float>>(channels, out_ch, 3, nn::Padding::Same);
        if (i == 0) conv->set_needs_input_grad(false);
        net.emplace<nn::Relu<float>>();
        net.emplace<nn::MaxPool1d<float>>();
        channels = out_ch;
        out_ch = std::min<std::size_t>(out_ch * 2, 256);
        length /= 2;
      }
      net.emplace<nn::Flatten<float>>();
      net.emplace<nn::Linear<float>>(channels * length, spec.fc_hidden);
      net.emplace<nn::Relu<float>>();
      net.emplace<nn::Linear<float>>(spec.fc_hidden, k);
      break;
    }
  }

  rng::Xoshiro256ss rng(rng::derive_seed(seed, 0x1a17));
  net.init(rng);
  return m;
}

// --- training ----------------------------------------------------------------

struct TrainConfig {
  enum class Optimizer { Sgd, Adam };
  Optimizer optimizer = Optimizer::Sgd;
  double lr = 1e-4;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  std::size_t batch_size = 32;
  std::size_t epochs = 100;
  int plateau_patience = 50;
  double plateau_factor = 0.5;
  std::uint64_t seed = 0;
  // Stop once test accuracy reaches this value; negative disables.
  double target_test_accuracy = -1.0;

  void validate() const {
    if (!(lr > 0.0)) throw std::invalid_argument("train: lr must be positive");
    if (momentum < 0.0 || weight_decay < 0.0)
      throw std::invalid_argument("train: negative momentum/weight decay");
    if (batch_size < 1) throw std::invalid_argument("train: batch_size >= 1");
    if (epochs < 1) throw std::invalid_argument("train: epochs >= 1");
    if (plateau_patience < 1 || !(plateau_factor > 0.0) ||
        plateau_factor >= 1.0)
      throw std::invalid_argument("train: bad plateau schedule");
  }
};

inline std::string optimizer_name(TrainConfig::Optimizer o) {
  return o == TrainConfig::Optimizer::Sgd ? "sgd" : "adam";
}

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double lr = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> history;
  double wall_time_s = 0.0;
  double final_test_accuracy = 0.0;
  double best_test_accuracy = 0.0;
  std::size_t best_epoch = 0;
};

struct EvalResult {
  double accuracy = 0.0;
  std::vector<std::size_t> confusion;  // k x k, rows = true label
  std::size_t k = 0;

  std::size_t at(std::size_t truth, std::size_t pred) const {
    return confusion[truth * k + pred];
  }
};

namespace detail {

inline nn::Tensor<float> make_batch(const std::vector<data::Chunk>& chunks,
                                    const std::vector<std::size_t>& order,
                                    std::size_t begin, std::size_t end,
                                    std::size_t w, std::vector<int>& labels) {
  const std::size_t s = end - begin;
  nn::Tensor<float> x({s, 1, w});
  labels.resize(s);
  for (std::size_t b = 0; b < s; ++b) {
    const auto& chunk = chunks[order[begin + b]];
    labels[b] = chunk.label;
    float* row = &x(b, 0, 0);
    for (std::size_t t = 0; t < w; ++t)
      row[t] = static_cast<float>(chunk.values[t]);
  }
  return x;
}

inline int argmax_row(const float* row, std::size_t k) {
  int best = 0;
  for (std::size_t j = 1; j < k; ++j)
    if (row[j] > row[best]) best = static_cast<int>(j);
  return best;
}

}  // namespace detail

inline EvalResult evaluate(Model& model, const std::vector<data::Chunk>& chunks,
                           std::size_t batch_size = 64) {
  const std::size_t k = model.spec.classes;
  const std::size_t w = model.spec.width;
  EvalResult res;
  res.k = k;
  res.confusion.assign(k * k, 0);
  if (chunks.empty()) return res;

  std::vector<std::size_t> order(chunks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<int> labels;
  std::size_t correct = 0;
  for (std::size_t begin = 0; begin < chunks.size(); begin += batch_size) {
    const std::size_t end = std::min(chunks.size(), begin + batch_size);
    if (chunks[begin].values.size() != w)
      throw std::invalid_argument("evaluate: chunk width " +
                                  std::to_string(chunks[begin].values.size()) +
                                  " does not match model width " +
                                  std::to_string(w));
    auto x = detail::make_batch(chunks, order, begin, end, w, labels);
    auto logits = model.net.forward(x, false);
    for (std::size_t b = 0; b < end - begin; ++b) {
      const int pred = detail::argmax_row(&logits(b, 0), k);
      res.confusion[static_cast<std::size_t>(labels[b]) * k +
                    static_cast<std::size_t>(pred)]++;
      if (pred == labels[b]) ++correct;
    }
  }
  res.accuracy = static_cast<double>(correct) / static_cast<double>(chunks.size());
  return res;
}

inline TrainReport train(Model& model, const data::Dataset& dataset,
                         const TrainConfig& cfg) {
  cfg.validate();
  if (dataset.w != model.spec.width)
    throw std::invalid_argument("train: dataset width " +
                                std::to_string(dataset.w) +
                                " does not match model width " +
                                std::to_string(model.spec.width));
  if (dataset.k != model.spec.classes)
    throw std::invalid_argument("train: dataset has " +
                                std::to_string(dataset.k) +
                                " classes, model expects " +
                                std::to_string(model.spec.classes));
  if (dataset.train.empty())
    throw std::invalid_argument("train: empty training half");

  const auto t0 = std::chrono::steady_clock::now();
  nn::Sgd<float> sgd(cfg.lr, cfg.momentum, cfg.weight_decay);
  nn::Adam<float> adam(cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay);
  nn::PlateauScheduler scheduler(cfg.plateau_patience, cfg.plateau_factor);
  nn::SoftmaxCrossEntropy<float> loss_fn;
  rng::Xoshiro256ss shuffle_rng(rng::derive_seed(cfg.seed, 0x5bff1e));

  const std::size_t k = model.spec.classes;
  std::vector<std::size_t> order(dataset.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainReport report;
  double lr = cfg.lr;
  std::vector<int> labels;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      auto x = detail::make_batch(dataset.train, order, begin, end, dataset.w,
                                  labels);
      auto logits = model.net.forward(x, true);
      const double loss = loss_fn.forward(logits, labels);
      if (!std::isfinite(loss))
        throw std::runtime_error("train: non-finite loss at epoch " +
                                 std::to_string(epoch));
      loss_sum += loss * static_cast<double>(end - begin);
      for (std::size_t b = 0; b < end - begin; ++b)
        if (detail::argmax_row(&logits(b, 0), k) == labels[b]) ++correct;

      model.net.zero_grad();
      model.net.backward(loss_fn.backward());
      if (cfg.optimizer == TrainConfig::Optimizer::Sgd) {
        sgd.lr() = lr;
        sgd.step(model.net.params());
      } else {
        adam.lr() = lr;
        adam.step(model.net.params());
      }
    }

    EpochStats st;
    st.epoch = epoch;
    st.train_loss = loss_sum / static_cast<double>(order.size());
    st.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(order.size());
    st.test_accuracy = evaluate(model, dataset.test).accuracy;
    st.lr = lr;
    report.history.push_back(st);

    if (report.history.size() == 1 ||
        st.test_accuracy > report.best_test_accuracy) {
      report.best_test_accuracy = st.test_accuracy;
      report.best_epoch = epoch;
    }
    lr = scheduler.step(st.train_loss, lr);
    if (cfg.target_test_accuracy >= 0.0 &&
        st.test_accuracy >= cfg.target_test_accuracy)
      break;
  }
  report.final_test_accuracy = report.history.back().test_accuracy;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

// TrainReport CSV: one row per epoch.
inline void write_train_report(const TrainReport& report,
                               const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_train_report: cannot open " + path);
  os << "epoch,train_loss,train_acc,test_acc,lr\n";
  char buf[160];
  for (const auto& st : report.history) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", st.epoch,
                  st.train_loss, st.train_accuracy, st.test_accuracy, st.lr);
    os << buf;
  }
}

}  // namespace csense::models
