#pragma once

// Layer kernels for the 1-D classifiers: conv (cross-correlation), batch
// norm, ReLU, linear, pooling. Forward caches whatever backward needs; all
// reductions run in a fixed order so training trajectories are reproducible.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "csense/gemm.hpp"
#include "csense/rng.hpp"
#include "csense/tensor.hpp"

namespace csense::nn {

template <typename T>
struct ParamRef {
  std::string name;
  Tensor<T>* value;
  Tensor<T>* grad;
};

template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor<T> forward(const Tensor<T>& x, bool train) = 0;
  virtual Tensor<T> backward(const Tensor<T>& grad_out) = 0;
  virtual std::vector<ParamRef<T>> params() { return {}; }
  virtual void init(rng::Xoshiro256ss&) {}
  virtual std::string kind() const = 0;

  void zero_grad() {
    for (auto& p : params()) p.grad->fill(T{0});
  }
};

enum class Padding { Same, Valid };

// He-style uniform fan-in init, U(-sqrt(6/fan_in), sqrt(6/fan_in)).
template <typename T>
void he_uniform(Tensor<T>& w, std::size_t fan_in, rng::Xoshiro256ss& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  for (auto& v : w.data) v = static_cast<T>(rng.uniform(-bound, bound));
}

template <typename T>
class Conv1d final : public Layer<T> {
 public:
  Conv1d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
         Padding padding = Padding::Same)
      : c_(in_channels),
        f_(out_channels),
        k_(kernel),
        padding_(padding),
        weight_({out_channels, in_channels, kernel}),
        bias_({out_channels}),
        wgrad_({out_channels, in_channels, kernel}),
        bgrad_({out_channels}) {
    if (c_ == 0 || f_ == 0 || k_ == 0)
      throw std::invalid_argument("conv1d: zero-sized dimension");
  }

  void init(rng::Xoshiro256ss& rng) override {
    he_uniform(weight_, c_ * k_, rng);
    const double bound = 1.0 / std::sqrt(static_cast<double>(c_ * k_));
    for (auto& v : bias_.data) v = static_cast<T>(rng.uniform(-bound, bound));
  }

  std::size_t pad_left() const {
    return padding_ == Padding::Same ? (k_ - 1) / 2 : 0;
  }
  std::size_t pad_right() const {
    return padding_ == Padding::Same ? k_ - 1 - (k_ - 1) / 2 : 0;
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require_rank(x, 3, "conv1d");
    if (x.dim(1) != c_)
      throw std::invalid_argument("conv1d: input has " +
                                  std::to_string(x.dim(1)) +
                                  " channels, layer expects " +
                                  std::to_string(c_) + " (input " +
                                  x.shape_str() + ")");
    const std::size_t s = x.dim(0), L = x.dim(2);
    const std::size_t padded = L + pad_left() + pad_right();
    if (k_ > padded)
      throw std::invalid_argument("conv1d: kernel " + std::to_string(k_) +
                                  " longer than padded input " +
                                  std::to_string(padded));
    const std::size_t l_out = padded - k_ + 1;
    s_ = s;
    l_in_ = L;
    l_out_ = l_out;

    const std::size_t ck = c_ * k_;
    cols_.assign(s * ck * l_out, T{0});
    const long pl = static_cast<long>(pad_left());
    for (std::size_t b = 0; b < s; ++b) {
      T* col = cols_.data() + b * ck * l_out;
      for (std::size_t i = 0; i < c_; ++i) {
        const T* xin = &x(b, i, 0);
        for (std::size_t tau = 0; tau < k_; ++tau) {
          T* row = col + (i * k_ + tau) * l_out;
          // source index l = t + tau - pad_left
          const long base = static_cast<long>(tau) - pl;
          const long t0 = std::max(0L, -base);
          const long t1 = std::min(static_cast<long>(l_out),
                                   static_cast<long>(L) - base);
          for (long t = t0; t < t1; ++t) row[t] = xin[t + base];
        }
      }
    }

    Tensor<T> y({s, f_, l_out});
    for (std::size_t b = 0; b < s; ++b) {
      detail::gemm_nn(weight_.data.data(), cols_.data() + b * ck * l_out,
                      &y(b, 0, 0), f_, ck, l_out, false);
      for (std::size_t j = 0; j < f_; ++j) {
        T* row = &y(b, j, 0);
        const T bj = bias_(j);
        for (std::size_t t = 0; t < l_out; ++t) row[t] += bj;
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    require_rank(gy, 3, "conv1d backward");
    const std::size_t s = s_, l_out = l_out_, ck = c_ * k_;
    if (gy.dim(0) != s || gy.dim(1) != f_ || gy.dim(2) != l_out)
      throw std::invalid_argument("conv1d backward: gradient shape " +
                                  gy.shape_str() + " does not match output");

    for (std::size_t b = 0; b < s; ++b) {
      for (std::size_t j = 0; j < f_; ++j) {
        const T* row = &gy(b, j, 0);
        T acc{0};
        for (std::size_t t = 0; t < l_out; ++t) acc += row[t];
        bgrad_(j) += acc;
      }
      detail::gemm_nt(&gy(b, 0, 0), cols_.data() + b * ck * l_out,
                      wgrad_.data.data(), f_, l_out, ck, true);
    }

    Tensor<T> gx({s, c_, l_in_});
    if (!needs_input_grad_) return gx;

    std::vector<T> dcols(ck * l_out);
    const long pl = static_cast<long>(pad_left());
    for (std::size_t b = 0; b < s; ++b) {
      detail::gemm_tn(weight_.data.data(), &gy(b, 0, 0), dcols.data(), ck, f_,
                      l_out, false);
      for (std::size_t i = 0; i < c_; ++i) {
        T* gxr = &gx(b, i, 0);
        for (std::size_t tau = 0; tau < k_; ++tau) {
          const T* row = dcols.data() + (i * k_ + tau) * l_out;
          const long base = static_cast<long>(tau) - pl;
          const long t0 = std::max(0L, -base);
          const long t1 = std::min(static_cast<long>(l_out),
                                   static_cast<long>(l_in_) - base);
          for (long t = t0; t < t1; ++t) gxr[t + base] += row[t];
        }
      }
    }
    return gx;
  }

  std::vector<ParamRef<T>> params() override {
    return {{"weight", &weight_, &wgrad_}, {"bias", &bias_, &bgrad_}};
  }
  std::string kind() const override { return "conv1d"; }

  void set_needs_input_grad(bool v) { needs_input_grad_ = v; }
  Tensor<T>& weight() { return weight_; }
  Tensor<T>& bias() { return bias_; }

 private:
  std::size_t c_, f_, k_;
  Padding padding_;
  Tensor<T> weight_, bias_, wgrad_, bgrad_;
  std::vector<T> cols_;
  std::size_t s_ = 0, l_in_ = 0, l_out_ = 0;
  bool needs_input_grad_ = true;
};

template <typename T>
class BatchNorm1d final : public Layer<T> {
 public:
  explicit BatchNorm1d(std::size_t channels, double eps = 1e-5,
                       double momentum = 0.1)
      : f_(channels),
        eps_(eps),
        momentum_(momentum),
        gamma_({channels}),
        beta_({channels}),
        ggrad_({channels}),
        bgrad_({channels}),
        running_mean_({channels}),
        running_var_({channels}) {
    gamma_.fill(T{1});
    for (auto& v : running_var_.data) v = T{1};
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) override {
    require_rank(x, 3, "batchnorm1d");
    if (x.dim(1) != f_)
      throw std::invalid_argument("batchnorm1d: channel mismatch, input " +
                                  x.shape_str());
    const std::size_t s = x.dim(0), L = x.dim(2);
    const std::size_t n = s * L;
    Tensor<T> y({s, f_, L});

    if (train) {
      if (n < 2)
        throw std::invalid_argument(
            "batchnorm1d: train mode needs at least 2 values per channel");
      xhat_ = Tensor<T>({s, f_, L});
      istd_.assign(f_, T{0});
      s_ = s;
      l_ = L;
      for (std::size_t j = 0; j < f_; ++j) {
        double sum = 0.0;
        for (std::size_t b = 0; b < s; ++b) {
          const T* row = &x(b, j, 0);
          for (std::size_t t = 0; t < L; ++t) sum += row[t];
        }
        const double mu = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t b = 0; b < s; ++b) {
          const T* row = &x(b, j, 0);
          for (std::size_t t = 0; t < L; ++t) {
            const double d = static_cast<double>(row[t]) - mu;
            sq += d * d;
          }
        }
        const double var = sq / static_cast<double>(n);
        const double istd = 1.0 / std::sqrt(var + eps_);
        istd_[j] = static_cast<T>(istd);
        const T g = gamma_(j), be = beta_(j);
        for (std::size_t b = 0; b < s; ++b) {
          const T* row = &x(b, j, 0);
          T* xh = &xhat_(b, j, 0);
          T* yr = &y(b, j, 0);
          for (std::size_t t = 0; t < L; ++t) {
            const T h = static_cast<T>((static_cast<double>(row[t]) - mu) * istd);
            xh[t] = h;
            yr[t] = g * h + be;
          }
        }
        running_mean_(j) = static_cast<T>((1.0 - momentum_) *
                                              static_cast<double>(running_mean_(j)) +
                                          momentum_ * mu);
        running_var_(j) = static_cast<T>((1.0 - momentum_) *
                                             static_cast<double>(running_var_(j)) +
                                         momentum_ * var);
      }
    } else {
      for (std::size_t j = 0; j < f_; ++j) {
        const double istd =
            1.0 / std::sqrt(static_cast<double>(running_var_(j)) + eps_);
        const double mu = static_cast<double>(running_mean_(j));
        const T g = gamma_(j), be = beta_(j);
        for (std::size_t b = 0; b < s; ++b) {
          const T* row = &x(b, j, 0);
          T* yr = &y(b, j, 0);
          for (std::size_t t = 0; t < L; ++t)
            yr[t] = static_cast<T>(
                g * ((static_cast<double>(row[t]) - mu) * istd) + be);
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    const std::size_t s = s_, L = l_;
    const double n = static_cast<double>(s * L);
    Tensor<T> gx({s, f_, L});
    for (std::size_t j = 0; j < f_; ++j) {
      double sum_gy = 0.0, sum_gy_xhat = 0.0;
      for (std::size_t b = 0; b < s; ++b) {
        const T* g = &gy(b, j, 0);
        const T* xh = &xhat_(b, j, 0);
        for (std::size_t t = 0; t < L; ++t) {
          sum_gy += g[t];
          sum_gy_xhat += static_cast<double>(g[t]) * xh[t];
        }
      }
      bgrad_(j) += static_cast<T>(sum_gy);
      ggrad_(j) += static_cast<T>(sum_gy_xhat);
      const double gi = static_cast<double>(gamma_(j)) * istd_[j] / n;
      for (std::size_t b = 0; b < s; ++b) {
        const T* g = &gy(b, j, 0);
        const T* xh = &xhat_(b, j, 0);
        T* gxr = &gx(b, j, 0);
        for (std::size_t t = 0; t < L; ++t)
          gxr[t] = static_cast<T>(gi * (n * g[t] - sum_gy - xh[t] * sum_gy_xhat));
      }
    }
    return gx;
  }

  std::vector<ParamRef<T>> params() override {
    return {{"gamma", &gamma_, &ggrad_}, {"beta", &beta_, &bgrad_}};
  }
  std::string kind() const override { return "batchnorm1d"; }

  Tensor<T>& gamma() { return gamma_; }
  Tensor<T>& beta() { return beta_; }
  Tensor<T>& running_mean() { return running_mean_; }
  Tensor<T>& running_var() { return running_var_; }

 private:
  std::size_t f_;
  double eps_, momentum_;
  Tensor<T> gamma_, beta_, ggrad_, bgrad_, running_mean_, running_var_;
  Tensor<T> xhat_;
  std::vector<T> istd_;
  std::size_t s_ = 0, l_ = 0;
};

template <typename T>
class Relu final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    Tensor<T> y = x;
    mask_.assign(x.numel(), 0);
    for (std::size_t i = 0; i < y.numel(); ++i) {
      if (y.data[i] > T{0})
        mask_[i] = 1;
      else
        y.data[i] = T{0};
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> gx = gy;
    for (std::size_t i = 0; i < gx.numel(); ++i)
      if (!mask_[i]) gx.data[i] = T{0};
    return gx;
  }
  std::string kind() const override { return "relu"; }

 private:
  std::vector<std::uint8_t> mask_;
};

template <typename T>
class Linear final : public Layer<T> {
 public:
  Linear(std::size_t in, std::size_t out)
      : n_(in), m_(out), weight_({out, in}), bias_({out}), wgrad_({out, in}),
        bgrad_({out}) {}

  void init(rng::Xoshiro256ss& rng) override {
    he_uniform(weight_, n_, rng);
    const double bound = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& v : bias_.data) v = static_cast<T>(rng.uniform(-bound, bound));
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require_rank(x, 2, "linear");
    if (x.dim(1) != n_)
      throw std::invalid_argument("linear: input width " +
                                  std::to_string(x.dim(1)) +
                                  " does not match layer width " +
                                  std::to_string(n_));
    const std::size_t s = x.dim(0);
    x_ = x;
    Tensor<T> y({s, m_});
    detail::gemm_nt(x.data.data(), weight_.data.data(), y.data.data(), s, n_,
                    m_, false);
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t j = 0; j < m_; ++j) y(b, j) += bias_(j);
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) override {
    const std::size_t s = x_.dim(0);
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t j = 0; j < m_; ++j) bgrad_(j) += gy(b, j);
    detail::gemm_tn(gy.data.data(), x_.data.data(), wgrad_.data.data(), m_, s,
                    n_, true);
    Tensor<T> gx({s, n_});
    detail::gemm_nn(gy.data.data(), weight_.data.data(), gx.data.data(), s, m_,
                    n_, false);
    return gx;
  }

  std::vector<ParamRef<T>> params() override {
    return {{"weight", &weight_, &wgrad_}, {"bias", &bias_, &bgrad_}};
  }
  std::string kind() const override { return "linear"; }

  Tensor<T>& weight() { return weight_; }
  Tensor<T>& bias() { return bias_; }

 private:
  std::size_t n_, m_;
  Tensor<T> weight_, bias_, wgrad_, bgrad_;
  Tensor<T> x_;
};

// Mean over the length axis: [s,f,L] -> [s,f].
template <typename T>
class GlobalAvgPool final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require_rank(x, 3, "global_avg_pool");
    const std::size_t s = x.dim(0), f = x.dim(1), L = x.dim(2);
    s_ = s;
    f_ = f;
    l_ = L;
    Tensor<T> y({s, f});
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t j = 0; j < f; ++j) {
        const T* row = &x(b, j, 0);
        double acc = 0.0;
        for (std::size_t t = 0; t < L; ++t) acc += row[t];
        y(b, j) = static_cast<T>(acc / static_cast<double>(L));
      }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> gx({s_, f_, l_});
    for (std::size_t b = 0; b < s_; ++b)
      for (std::size_t j = 0; j < f_; ++j) {
        const T g = gy(b, j) / static_cast<T>(l_);
        T* row = &gx(b, j, 0);
        for (std::size_t t = 0; t < l_; ++t) row[t] = g;
      }
    return gx;
  }
  std::string kind() const override { return "global_avg_pool"; }

 private:
  std::size_t s_ = 0, f_ = 0, l_ = 0;
};

// Width-2, stride-2 max pool; an odd trailing element is dropped. Ties take
// the earlier index.
template <typename T>
class MaxPool1d final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require_rank(x, 3, "maxpool1d");
    const std::size_t s = x.dim(0), f = x.dim(1), L = x.dim(2);
    if (L < 2) throw std::invalid_argument("maxpool1d: length below 2");
    const std::size_t l_out = L / 2;
    s_ = s;
    f_ = f;
    l_in_ = L;
    l_out_ = l_out;
    argmax_.assign(s * f * l_out, 0);
    Tensor<T> y({s, f, l_out});
    for (std::size_t b = 0; b < s; ++b)
      for (std::size_t j = 0; j < f; ++j) {
        const T* row = &x(b, j, 0);
        T* yr = &y(b, j, 0);
        std::size_t* am = argmax_.data() + (b * f + j) * l_out;
        for (std::size_t t = 0; t < l_out; ++t) {
          const std::size_t i0 = 2 * t;
          if (row[i0] >= row[i0 + 1]) {
            yr[t] = row[i0];
            am[t] = i0;
          } else {
            yr[t] = row[i0 + 1];
            am[t] = i0 + 1;
          }
        }
      }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> gx({s_, f_, l_in_});
    for (std::size_t b = 0; b < s_; ++b)
      for (std::size_t j = 0; j < f_; ++j) {
        const T* g = &gy(b, j, 0);
        T* gxr = &gx(b, j, 0);
        const std::size_t* am = argmax_.data() + (b * f_ + j) * l_out_;
        for (std::size_t t = 0; t < l_out_; ++t) gxr[am[t]] += g[t];
      }
    return gx;
  }
  std::string kind() const override { return "maxpool1d"; }

 private:
  std::vector<std::size_t> argmax_;
  std::size_t s_ = 0, f_ = 0, l_in_ = 0, l_out_ = 0;
};

template <typename T>
class Flatten final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require_rank(x, 3, "flatten");
    c_ = x.dim(1);
    l_ = x.dim(2);
    Tensor<T> y = x;
    y.shape = {x.dim(0), c_ * l_};
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy) override {
    Tensor<T> gx = gy;
    gx.shape = {gy.dim(0), c_, l_};
    return gx;
  }
  std::string kind() const override { return "flatten"; }

 private:
  std::size_t c_ = 0, l_ = 0;
};

template <typename T>
class Sequential {
 public:
  Sequential() = default;

  template <typename L, typename... Args>
  L* emplace(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L* raw = layer.get();
    layers_.push_back(std::move(layer));
    return raw;
  }

  Tensor<T> forward(const Tensor<T>& x, bool train) {
    Tensor<T> h = x;
    for (auto& l : layers_) h = l->forward(h, train);
    return h;
  }

  Tensor<T> backward(const Tensor<T>& grad_out) {
    Tensor<T> g = grad_out;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
      g = (*it)->backward(g);
    return g;
  }

  std::vector<ParamRef<T>> params() {
    std::vector<ParamRef<T>> out;
    for (std::size_t i = 0; i < layers_.size(); ++i)
      for (auto& p : layers_[i]->params())
        out.push_back({"l" + std::to_string(i) + "." + layers_[i]->kind() +
                           "." + p.name,
                       p.value, p.grad});
    return out;
  }

  void zero_grad() {
    for (auto& l : layers_) l->zero_grad();
  }

  void init(rng::Xoshiro256ss& rng) {
    for (auto& l : layers_) l->init(rng);
  }

  std::size_t param_count() {
    std::size_t n = 0;
    for (auto& p : params()) n += p.value->numel();
    return n;
  }

  std::vector<std::unique_ptr<Layer<T>>>& layers() { return layers_; }

 private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

}  // namespace csense::nn
