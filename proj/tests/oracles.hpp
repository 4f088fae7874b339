#pragma once

// Independent reference implementations used as test oracles. Everything here
// is written straight from first principles (nested loops, brute-force
// enumeration, finite differences) and must stay decoupled from the library
// code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "csense/tensor.hpp"

namespace oracle {

// Cross-correlation by definition: y[b,j,t] = bias[j] +
//   sum_i sum_tau x[b,i,t+tau-padL] * w[j,i,tau], out-of-range x = 0.
template <typename T>
csense::nn::Tensor<T> conv1d_loop(const csense::nn::Tensor<T>& x,
                                  const csense::nn::Tensor<T>& w,
                                  const csense::nn::Tensor<T>& bias,
                                  bool same_padding) {
  const std::size_t s = x.dim(0), c = x.dim(1), L = x.dim(2);
  const std::size_t f = w.dim(0), K = w.dim(2);
  const long pad_l = same_padding ? static_cast<long>((K - 1) / 2) : 0;
  const std::size_t l_out = same_padding ? L : L - K + 1;
  csense::nn::Tensor<T> y({s, f, l_out});
  for (std::size_t b = 0; b < s; ++b)
    for (std::size_t j = 0; j < f; ++j)
      for (std::size_t t = 0; t < l_out; ++t) {
        double acc = bias(j);
        for (std::size_t i = 0; i < c; ++i)
          for (std::size_t tau = 0; tau < K; ++tau) {
            const long src = static_cast<long>(t) + static_cast<long>(tau) - pad_l;
            if (src >= 0 && src < static_cast<long>(L))
              acc += static_cast<double>(x(b, i, static_cast<std::size_t>(src))) *
                     static_cast<double>(w(j, i, tau));
          }
        y(b, j, t) = static_cast<T>(acc);
      }
  return y;
}

// y[b,m] = sum_n x[b,n] * w[m,n] + bias[m]
template <typename T>
csense::nn::Tensor<T> linear_loop(const csense::nn::Tensor<T>& x,
                                  const csense::nn::Tensor<T>& w,
                                  const csense::nn::Tensor<T>& bias) {
  const std::size_t s = x.dim(0), n = x.dim(1), m = w.dim(0);
  csense::nn::Tensor<T> y({s, m});
  for (std::size_t b = 0; b < s; ++b)
    for (std::size_t j = 0; j < m; ++j) {
      double acc = bias(j);
      for (std::size_t i = 0; i < n; ++i)
        acc += static_cast<double>(x(b, i)) * static_cast<double>(w(j, i));
      y(b, j) = static_cast<T>(acc);
    }
  return y;
}

// Central finite difference of a scalar-valued closure w.r.t. one value.
inline double central_diff(const std::function<double()>& f, double& value,
                           double h) {
  const double orig = value;
  value = orig + h;
  const double fp = f();
  value = orig - h;
  const double fm = f();
  value = orig;
  return (fp - fm) / (2.0 * h);
}

// Max relative error between analytic gradients and central differences over
// every element of a parameter tensor.
inline double max_grad_rel_error(const std::function<double()>& loss,
                                 std::vector<double>& values,
                                 const std::vector<double>& analytic,
                                 double h_scale = 1e-5) {
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = h_scale * std::max(1.0, std::abs(values[i]));
    const double numeric = central_diff(loss, values[i], h);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-8});
    worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
  }
  return worst;
}

// Brute-force window enumeration: every offset o with o = k*stride and
// o + w <= N.
inline std::vector<std::size_t> window_offsets(std::size_t n, std::size_t w) {
  const std::size_t stride = w >= 4 ? w / 4 : 1;
  std::vector<std::size_t> offsets;
  for (std::size_t o = 0; o + w <= n; o += stride) offsets.push_back(o);
  return offsets;
}

// Reference debounce automaton: the confirmed class changes exactly when two
// consecutive identical predictions differ from it.
struct DebounceReference {
  int confirmed;
  int prev = -1000000;

  explicit DebounceReference(int initial) : confirmed(initial) {}

  int step(int prediction) {
    if (prediction != confirmed && prediction == prev) confirmed = prediction;
    prev = prediction;
    return confirmed;
  }
};

// Spearman rank correlation (no tie handling beyond average-free ranks;
// inputs here are continuous).
inline double spearman(const std::vector<double>& a,
                       const std::vector<double>& b) {
  const std::size_t n = a.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[idx[i]] = static_cast<double>(i);
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  double d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

// Two-state chain stationary busy probability from transition parameters.
inline double chain_stationary(double stay_busy, double enter_busy) {
  if (enter_busy == 0.0) return 0.0;
  return enter_busy / (enter_busy + 1.0 - stay_busy);
}

}  // namespace oracle
