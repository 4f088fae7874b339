#pragma once

// Softmax cross-entropy, stabilized by row-max subtraction. Probabilities and
// the mean loss are accumulated in double regardless of the parameter type.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "csense/tensor.hpp"

namespace csense::nn {

template <typename T>
std::vector<double> softmax_row(const T* logits, std::size_t k) {
  double mx = logits[0];
  for (std::size_t j = 1; j < k; ++j)
    mx = std::max(mx, static_cast<double>(logits[j]));
  std::vector<double> p(k);
  double denom = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    p[j] = std::exp(static_cast<double>(logits[j]) - mx);
    denom += p[j];
  }
  for (std::size_t j = 0; j < k; ++j) p[j] /= denom;
  return p;
}

template <typename T>
class SoftmaxCrossEntropy {
 public:
  // Mean of -log softmax(logits)[label] over the batch.
  double forward(const Tensor<T>& logits, const std::vector<int>& labels) {
    require_rank(logits, 2, "softmax_cross_entropy");
    const std::size_t s = logits.dim(0), k = logits.dim(1);
    if (labels.size() != s)
      throw std::invalid_argument("softmax_cross_entropy: batch size " +
                                  std::to_string(s) + " but " +
                                  std::to_string(labels.size()) + " labels");
    probs_ = Tensor<double>({s, k});
    labels_ = labels;
    double loss = 0.0;
    for (std::size_t b = 0; b < s; ++b) {
      if (labels[b] < 0 || static_cast<std::size_t>(labels[b]) >= k)
        throw std::invalid_argument("softmax_cross_entropy: label " +
                                    std::to_string(labels[b]) +
                                    " outside [0," + std::to_string(k) + ")");
      const auto p = softmax_row(&logits(b, 0), k);
      for (std::size_t j = 0; j < k; ++j) probs_(b, j) = p[j];
      loss -= std::log(p[static_cast<std::size_t>(labels[b])]);
    }
    return loss / static_cast<double>(s);
  }

  // d(mean loss)/d(logits) = (softmax - onehot) / s
  Tensor<T> backward() const {
    const std::size_t s = probs_.dim(0), k = probs_.dim(1);
    Tensor<T> g({s, k});
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t j = 0; j < k; ++j) {
        double v = probs_(b, j);
        if (static_cast<std::size_t>(labels_[b]) == j) v -= 1.0;
        g(b, j) = static_cast<T>(v / static_cast<double>(s));
      }
    return g;
  }

  const Tensor<double>& probabilities() const { return probs_; }

 private:
  Tensor<double> probs_;
  std::vector<int> labels_;
};

}  // namespace csense::nn
