#pragma once

// Small row-major matrix kernels for the conv/linear layers. The loop orders
// are fixed so a given seed always produces bit-identical results; each output
// row is accumulated left to right.

#include <cstddef>

namespace csense::nn::detail {

// C[M,N] (+)= A[M,K] * B[K,N]
template <typename T>
void gemm_nn(const T* a, const T* b, T* c, std::size_t M, std::size_t K,
             std::size_t N, bool accumulate) {
  for (std::size_t i = 0; i < M; ++i) {
    T* __restrict crow = c + i * N;
    if (!accumulate)
      for (std::size_t j = 0; j < N; ++j) crow[j] = T{0};
    const T* arow = a + i * K;
    for (std::size_t k = 0; k < K; ++k) {
      const T aik = arow[k];
      if (aik == T{0}) continue;
      const T* __restrict brow = b + k * N;
      for (std::size_t j = 0; j < N; ++j) crow[j] += aik * brow[j];
    }
  }
}

// C[M,N] (+)= A[M,K] * B[N,K]^T   (dot products along contiguous K)
template <typename T>
void gemm_nt(const T* a, const T* b, T* c, std::size_t M, std::size_t K,
             std::size_t N, bool accumulate) {
  for (std::size_t i = 0; i < M; ++i) {
    const T* __restrict arow = a + i * K;
    T* crow = c + i * N;
    for (std::size_t j = 0; j < N; ++j) {
      const T* __restrict brow = b + j * K;
      T acc{0};
      for (std::size_t k = 0; k < K; ++k) acc += arow[k] * brow[k];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

// C[M,N] (+)= A[K,M]^T * B[K,N]
template <typename T>
void gemm_tn(const T* a, const T* b, T* c, std::size_t M, std::size_t K,
             std::size_t N, bool accumulate) {
  if (!accumulate)
    for (std::size_t i = 0; i < M * N; ++i) c[i] = T{0};
  for (std::size_t k = 0; k < K; ++k) {
    const T* arow = a + k * M;
    const T* __restrict brow = b + k * N;
    for (std::size_t i = 0; i < M; ++i) {
      const T aki = arow[i];
      if (aki == T{0}) continue;
      T* __restrict crow = c + i * N;
      for (std::size_t j = 0; j < N; ++j) crow[j] += aki * brow[j];
    }
  }
}

}  // namespace csense::nn::detail
