#pragma once

#include <vector>

#include "alocc/kernels.hpp"
#include "alocc/tensor.hpp"

// Differentiable tensor operations. Each op computes its forward value and,
// when a tape is supplied and any input carries a gradient, records a
// backward rule on it. Passing tape == nullptr gives a pure evaluation.

namespace alocc {

using kern::Act;

/// Per-channel running statistics for batch normalization.
template <class T>
struct BnState {
    std::vector<T> mean;
    std::vector<T> var;

    BnState() = default;
    explicit BnState(int channels)
        : mean(static_cast<size_t>(channels), T(0)), var(static_cast<size_t>(channels), T(1)) {}
    int channels() const { return static_cast<int>(mean.size()); }
};

/// Cross-correlation of input[N,Cin,H,W] with kernel[Cout,Cin,kh,kw].
/// H' = floor((H + 2*pad - kh) / stride) + 1, analogously W'.
template <class T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& kernel, int stride, int padding,
                 Tape<T>* tape = nullptr);

/// Linear adjoint of conv2d with the same stride/padding.
/// Kernel layout [Cin,Cout,kh,kw]; H'' = (H-1)*stride - 2*padding + kh.
template <class T>
Tensor<T> conv2d_transpose(const Tensor<T>& x, const Tensor<T>& kernel, int stride, int padding,
                           Tape<T>* tape = nullptr);

/// Train mode normalizes by biased batch statistics and updates the running
/// stats as running <- decay*running + (1-decay)*batch; eval mode uses the
/// running stats. eps sits inside the square root.
template <class T>
Tensor<T> batch_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                     BnState<T>& state, bool train, T decay, T eps, Tape<T>* tape = nullptr);

template <class T>
Tensor<T> activation(const Tensor<T>& x, Act kind, T alpha = T(0.2), Tape<T>* tape = nullptr);

/// Mean over the batch (dim 0) of the per-sample squared L2 norm
/// ||x - x_prime||^2, summed over all non-batch elements.
template <class T>
Tensor<T> mse_loss(const Tensor<T>& x, const Tensor<T>& x_prime, Tape<T>* tape = nullptr);

/// Mean over all entries of -[t*log(s) + (1-t)*log(1-s)], with s clamped to
/// [1e-7, 1 - 1e-7] before the logs.
template <class T>
Tensor<T> bce_loss(const Tensor<T>& score, int target_label, Tape<T>* tape = nullptr);

template <class T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b, Tape<T>* tape = nullptr);

template <class T>
Tensor<T> scale(const Tensor<T>& a, T c, Tape<T>* tape = nullptr);

template <class T>
Tensor<T> sum(const Tensor<T>& x, Tape<T>* tape = nullptr);

} // namespace alocc
