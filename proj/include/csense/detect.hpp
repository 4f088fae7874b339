#pragma once

// Chunk classifiers and detection metrics. ml_classify wraps a trained model
// behind the exact clamp/normalize transform of its training dataset; the
// energy-detection baseline thresholds the per-chunk mean dBm value.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "csense/dataprep.hpp"
#include "csense/loss.hpp"
#include "csense/models.hpp"

namespace csense::detect {

struct Prediction {
  std::vector<double> probabilities;  // sums to 1
  int label = 0;                      // argmax, lowest index on ties
  std::size_t width = 0;
};

// Raw dBm chunk in, class out. Applies the stored training statistics; using
// anything else (e.g. test-derived stats) breaks scale consistency.
inline Prediction ml_classify(models::Model& model,
                              const std::vector<double>& chunk_dbm,
                              const data::NormStats& stats) {
  const std::size_t w = model.spec.width;
  if (chunk_dbm.size() != w)
    throw std::invalid_argument("ml_classify: chunk length " +
                                std::to_string(chunk_dbm.size()) +
                                " does not match model width " +
                                std::to_string(w));
  const auto normalized =
      data::normalize(data::clamp_outliers(chunk_dbm, stats), stats);
  nn::Tensor<float> x({1, 1, w});
  for (std::size_t t = 0; t < w; ++t)
    x(0, 0, t) = static_cast<float>(normalized[t]);
  auto logits = model.net.forward(x, false);

  Prediction pred;
  pred.width = w;
  pred.probabilities = nn::softmax_row(&logits(0, 0), model.spec.classes);
  pred.label = 0;
  for (std::size_t j = 1; j < pred.probabilities.size(); ++j)
    if (pred.probabilities[j] > pred.probabilities[pred.label])
      pred.label = static_cast<int>(j);
  return pred;
}

inline Prediction ml_classify(models::Model& model,
                              const std::vector<double>& chunk_dbm) {
  return ml_classify(model, chunk_dbm, model.stats);
}

// --- energy detection --------------------------------------------------------

struct EdThresholds {
  std::vector<double> cuts;  // k-1 strictly increasing dBm cut points

  void validate() const {
    for (std::size_t i = 1; i < cuts.size(); ++i)
      if (!(cuts[i] > cuts[i - 1]))
        throw std::invalid_argument("ed thresholds: cuts not strictly increasing");
  }
};

inline double chunk_mean(const std::vector<double>& values) {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

// Label = number of cut points at or below the chunk's mean (a mean exactly
// on a cut goes to the higher class).
inline int ed_classify_mean(double mean_dbm, const EdThresholds& thresholds) {
  int label = 0;
  for (double cut : thresholds.cuts)
    if (cut <= mean_dbm) ++label;
  return label;
}

inline int ed_classify(const std::vector<double>& chunk_dbm,
                       const EdThresholds& thresholds) {
  return ed_classify_mean(chunk_mean(chunk_dbm), thresholds);
}

// Grid search (0.1 dB steps over the observed range of chunk means) for the
// cut points that maximize train accuracy of the mean-energy classifier.
// Exhaustive over cut tuples; k is 2 or 3 here so the grid stays small.
inline EdThresholds calibrate_ed_thresholds(
    const std::vector<std::vector<double>>& chunks_dbm,
    const std::vector<int>& labels, std::size_t k) {
  if (k < 2)
    throw std::invalid_argument("calibrate_ed: need at least 2 classes");
  if (k > 3)
    throw std::invalid_argument("calibrate_ed: only 2 or 3 classes supported");
  if (chunks_dbm.size() != labels.size() || chunks_dbm.empty())
    throw std::invalid_argument("calibrate_ed: empty or mismatched input");

  std::vector<double> means(chunks_dbm.size());
  for (std::size_t i = 0; i < chunks_dbm.size(); ++i)
    means[i] = chunk_mean(chunks_dbm[i]);

  const double lo = *std::min_element(means.begin(), means.end());
  const double hi = *std::max_element(means.begin(), means.end());
  const double base = std::floor(lo * 10.0) / 10.0;
  std::vector<double> grid;
  for (std::size_t i = 0; base + 0.1 * static_cast<double>(i) <= hi + 0.15; ++i)
    grid.push_back(base + 0.1 * static_cast<double>(i));

  // below[c][b] = chunks of class c whose mean is < grid[b] (the tie rule in
  // ed_classify sends a mean equal to a cut to the higher class).
  const std::size_t g = grid.size();
  std::vector<std::vector<std::size_t>> below(
      k, std::vector<std::size_t>(g, 0));
  for (std::size_t i = 0; i < means.size(); ++i) {
    const auto bin = static_cast<std::size_t>(
        std::upper_bound(grid.begin(), grid.end(), means[i]) - grid.begin());
    if (bin < g) below[static_cast<std::size_t>(labels[i])][bin]++;
  }
  std::vector<std::size_t> total(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t b = 1; b < g; ++b) below[c][b] += below[c][b - 1];
    for (const int l : labels)
      if (static_cast<std::size_t>(l) == c) ++total[c];
  }

  EdThresholds best;
  std::size_t best_correct = 0;
  if (k == 2) {
    for (std::size_t b = 0; b < g; ++b) {
      const std::size_t correct = below[0][b] + (total[1] - below[1][b]);
      if (correct > best_correct) {
        best_correct = correct;
        best.cuts = {grid[b]};
      }
    }
  } else {
    for (std::size_t b1 = 0; b1 < g; ++b1)
      for (std::size_t b2 = b1 + 1; b2 < g; ++b2) {
        const std::size_t correct = below[0][b1] +
                                    (below[1][b2] - below[1][b1]) +
                                    (total[2] - below[2][b2]);
        if (correct > best_correct) {
          best_correct = correct;
          best.cuts = {grid[b1], grid[b2]};
        }
      }
  }
  if (best.cuts.empty()) {  // indistinguishable classes: any cut ties at 1/k
    best.cuts = {grid[0]};
    if (k == 3) best.cuts.push_back(grid[0] + 0.1);
  }
  best.validate();
  return best;
}

// --- metrics -----------------------------------------------------------------

struct DetectionReport {
  double accuracy = 0.0;
  double pd = 0.0;   // target-class chunks correctly detected
  double pfa = 0.0;  // other-class chunks mislabeled as the target
  std::size_t target = 0;
  bool target_present = false;  // pd undefined otherwise
  bool others_present = false;  // pfa undefined otherwise
};

inline DetectionReport detection_metrics(const std::vector<int>& predictions,
                                         const std::vector<int>& labels,
                                         int target) {
  if (predictions.size() != labels.size() || predictions.empty())
    throw std::invalid_argument("detection_metrics: empty or mismatched input");
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0, correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == labels[i]) ++correct;
    if (labels[i] == target)
      (predictions[i] == target ? tp : fn)++;
    else
      (predictions[i] == target ? fp : tn)++;
  }
  DetectionReport r;
  r.target = static_cast<std::size_t>(target);
  r.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  r.target_present = (tp + fn) > 0;
  r.pd = r.target_present ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                          : 0.0;
  r.others_present = (fp + tn) > 0;
  r.pfa = r.others_present
              ? static_cast<double>(fp) / static_cast<double>(fp + tn)
              : 0.0;
  return r;
}

}  // namespace csense::detect
