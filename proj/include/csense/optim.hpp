#pragma once

// Optimizers and the plateau LR schedule used by the training loop.
//   SGD:  g' = g + wd*theta;  v <- m*v + g';  theta <- theta - lr*v
//   Adam: bias-corrected first/second moments, L2 decay folded into g.
// Optimizer state serializes so a restored run continues on the exact same
// trajectory.

#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "csense/layers.hpp"

namespace csense::nn {

template <typename T>
class Sgd {
 public:
  Sgd(double lr, double momentum = 0.9, double weight_decay = 0.0)
      : lr_(lr), momentum_(momentum), weight_decay_(weight_decay) {}

  void step(const std::vector<ParamRef<T>>& params) {
    if (velocity_.empty())
      for (const auto& p : params)
        velocity_.emplace_back(std::vector<T>(p.value->numel(), T{0}));
    for (std::size_t i = 0; i < params.size(); ++i) {
      T* th = params[i].value->data.data();
      const T* g = params[i].grad->data.data();
      T* v = velocity_[i].data();
      const std::size_t n = params[i].value->numel();
      for (std::size_t j = 0; j < n; ++j) {
        const T gd = g[j] + static_cast<T>(weight_decay_) * th[j];
        v[j] = static_cast<T>(momentum_) * v[j] + gd;
        th[j] -= static_cast<T>(lr_) * v[j];
      }
    }
  }

  double& lr() { return lr_; }

  void save_state(std::ostream& os) const { save_buffers(os, velocity_); }
  void load_state(std::istream& is) { load_buffers(is, velocity_); }

  static void save_buffers(std::ostream& os,
                           const std::vector<std::vector<T>>& bufs) {
    const std::uint64_t nb = bufs.size();
    os.write(reinterpret_cast<const char*>(&nb), sizeof nb);
    for (const auto& b : bufs) {
      const std::uint64_t n = b.size();
      os.write(reinterpret_cast<const char*>(&n), sizeof n);
      os.write(reinterpret_cast<const char*>(b.data()),
               static_cast<std::streamsize>(n * sizeof(T)));
    }
  }
  static void load_buffers(std::istream& is, std::vector<std::vector<T>>& bufs) {
    std::uint64_t nb = 0;
    is.read(reinterpret_cast<char*>(&nb), sizeof nb);
    bufs.assign(nb, {});
    for (auto& b : bufs) {
      std::uint64_t n = 0;
      is.read(reinterpret_cast<char*>(&n), sizeof n);
      b.assign(n, T{0});
      is.read(reinterpret_cast<char*>(b.data()),
              static_cast<std::streamsize>(n * sizeof(T)));
    }
    if (!is) throw std::runtime_error("optimizer state: truncated stream");
  }

 private:
  double lr_, momentum_, weight_decay_;
  std::vector<std::vector<T>> velocity_;
};

template <typename T>
class Adam {
 public:
  Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8,
       double weight_decay = 0.0)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
        weight_decay_(weight_decay) {}

  void step(const std::vector<ParamRef<T>>& params) {
    if (m_.empty()) {
      for (const auto& p : params) {
        m_.emplace_back(std::vector<T>(p.value->numel(), T{0}));
        v_.emplace_back(std::vector<T>(p.value->numel(), T{0}));
      }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      T* th = params[i].value->data.data();
      const T* g = params[i].grad->data.data();
      T* m = m_[i].data();
      T* v = v_[i].data();
      const std::size_t n = params[i].value->numel();
      for (std::size_t j = 0; j < n; ++j) {
        const double gd = static_cast<double>(g[j]) + weight_decay_ * th[j];
        m[j] = static_cast<T>(beta1_ * m[j] + (1.0 - beta1_) * gd);
        v[j] = static_cast<T>(beta2_ * v[j] + (1.0 - beta2_) * gd * gd);
        const double mhat = static_cast<double>(m[j]) / bc1;
        const double vhat = static_cast<double>(v[j]) / bc2;
        th[j] -= static_cast<T>(lr_ * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }

  double& lr() { return lr_; }
  std::uint64_t steps() const { return t_; }

  void save_state(std::ostream& os) const {
    os.write(reinterpret_cast<const char*>(&t_), sizeof t_);
    Sgd<T>::save_buffers(os, m_);
    Sgd<T>::save_buffers(os, v_);
  }
  void load_state(std::istream& is) {
    is.read(reinterpret_cast<char*>(&t_), sizeof t_);
    Sgd<T>::load_buffers(is, m_);
    Sgd<T>::load_buffers(is, v_);
  }

 private:
  double lr_, beta1_, beta2_, eps_, weight_decay_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

// Halves the learning rate after `patience` consecutive evaluations without
// improvement of the monitored metric (lower is better). The counter resets
// on improvement and on each reduction.
class PlateauScheduler {
 public:
  PlateauScheduler(int patience = 50, double factor = 0.5)
      : patience_(patience), factor_(factor) {}

  double step(double metric, double lr) {
    if (metric < best_) {
      best_ = metric;
      bad_ = 0;
      return lr;
    }
    if (++bad_ >= patience_) {
      bad_ = 0;
      return lr * factor_;
    }
    return lr;
  }

  int bad_count() const { return bad_; }
  double best() const { return best_; }

 private:
  int patience_;
  double factor_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_ = 0;
};

}  // namespace csense::nn
