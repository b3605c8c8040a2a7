#pragma once

#include <cstddef>

// Parallel numeric kernels behind the tensor ops. Every kernel is written
// owner-computes: each output element is produced by exactly one loop
// iteration, so results are bitwise identical for any OpenMP thread count.
// A naive serial counterpart of the conv family lives in alocc/ref.hpp and
// is used by the tests and the benchmark.

namespace alocc::kern {

// out[n,a,i,j] = sum_{b,u,v} in[n,b, i*s+u-p, j*s+v-p] * w[a,b,u,v]
// Cross-correlation (no kernel flip). Also the input-gradient of conv_adjoint.
template <class T>
void conv_corr(const T* in, int n, int cin, int h, int w,
               const T* weight, int cout, int kh, int kw,
               int stride, int pad,
               T* out, int ho, int wo, bool accumulate);

// out[n,b,y,x] = sum_{a,u,v : (y+p-u) % s == 0} in[n,a,(y+p-u)/s,(x+p-v)/s] * w[a,b,u,v]
// Linear adjoint of conv_corr; the forward of conv2d_transpose and the
// input-gradient of conv2d.
template <class T>
void conv_adjoint(const T* in, int n, int cin, int h, int w,
                  const T* weight, int cout, int kh, int kw,
                  int stride, int pad,
                  T* out, int ho, int wo, bool accumulate);

// dw[a,b,u,v] = sum_{n,i,j} g[n,a,i,j] * x[n,b, i*s+u-p, j*s+v-p]
template <class T>
void conv_wgrad(const T* g, int n, int ca, int hg, int wg,
                const T* x, int cb, int hx, int wx,
                int kh, int kw, int stride, int pad,
                T* dw, bool accumulate);

// Per-channel batch statistics over (N,H,W); biased variance.
template <class T>
void bn_batch_stats(const T* x, int n, int c, int hw, T* mean, T* var);

// y = gamma * (x - mean) / sqrt(var + eps) + beta
template <class T>
void bn_apply(const T* x, int n, int c, int hw,
              const T* mean, const T* var, const T* gamma, const T* beta,
              T eps, T* y);

// Train-mode backward from saved batch statistics. Accumulates into
// dx/dgamma/dbeta (dx may be null when the input needs no gradient).
template <class T>
void bn_backward_train(const T* x, const T* gy, int n, int c, int hw,
                       const T* mean, const T* var, const T* gamma, T eps,
                       T* dx, T* dgamma, T* dbeta);

// Eval-mode backward: a per-channel affine map.
template <class T>
void bn_backward_eval(const T* x, const T* gy, int n, int c, int hw,
                      const T* mean, const T* var, const T* gamma, T eps,
                      T* dx, T* dgamma, T* dbeta);

enum class Act { Sigmoid, Tanh, LeakyRelu };

template <class T>
void act_forward(Act kind, T alpha, const T* x, T* y, size_t count);

// gx += gy * act'(x); uses y where the derivative is cheaper from the output.
template <class T>
void act_backward(Act kind, T alpha, const T* x, const T* y, const T* gy,
                  T* gx, size_t count);

// y[i] = a[i] + c * b[i]
template <class T>
void axpy(const T* a, const T* b, T c, T* y, size_t count);

// y[i] += c * g[i]
template <class T>
void accumulate_scaled(const T* g, T c, T* y, size_t count);

} // namespace alocc::kern
